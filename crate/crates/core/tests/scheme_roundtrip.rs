use goppa_ld::binmat::BitVector;
use goppa_ld::rng::stream;
use goppa_ld::scheme::{decrypt, encrypt, keygen, Decoder, KeyPair};
use goppa_ld::security::Variant;
use goppa_ld::Error;
use rand::Rng;

struct Tally {
    ok: usize,
    ambiguous: usize,
}

fn run(kp: &KeyPair, trials: usize, label: &str) -> Tally {
    let mut rng = stream(label, b"messages");
    let cap = kp.public.params.payload_capacity();
    let mut tally = Tally { ok: 0, ambiguous: 0 };
    for i in 0..trials {
        let len = if kp.public.params.k > 36 { rng.gen_range(0..=cap) } else { cap };
        let msg = BitVector::from_bits((0..len).map(|_| rng.gen::<bool>()));
        let ct = encrypt(&kp.public, &msg, &(i as u64).to_be_bytes()).unwrap();
        match decrypt(&kp.secret, &ct) {
            Ok(p) => {
                assert_eq!(p, msg, "{label}: wrong plaintext at trial {i}");
                tally.ok += 1;
            }
            Err(Error::Ambiguous(_)) => tally.ambiguous += 1,
            Err(e) => panic!("{label}: trial {i} failed with {e}"),
        }
    }
    tally
}

fn check(variant: Variant, m: u32, n: usize, r: usize, decoder: Decoder, trials: usize) {
    let label = format!("{variant}-{decoder}-{m}-{n}-{r}");
    let kp = keygen(variant, m, n, r, decoder, label.as_bytes()).unwrap();
    let t0 = std::time::Instant::now();
    let tally = run(&kp, trials, &label);
    eprintln!(
        "{label}: k={} w={} ok={} ambiguous={} in {:?}",
        kp.public.params.k, kp.public.params.w, tally.ok, tally.ambiguous, t0.elapsed()
    );
    assert_eq!(tally.ok + tally.ambiguous, trials);
    assert!(tally.ambiguous * 50 <= trials, "{label}: too many ambiguous lists");
}

#[test]
fn generic_unique_roundtrips() {
    check(Variant::Generic, 5, 32, 4, Decoder::Ud, 500);
    check(Variant::Generic, 6, 64, 6, Decoder::Ud, 500);
    check(Variant::Generic, 8, 200, 12, Decoder::Ud, 500);
}

#[test]
fn generic_list_roundtrips() {
    check(Variant::Generic, 5, 32, 4, Decoder::Ld, 500);
    check(Variant::Generic, 6, 64, 6, Decoder::Ld, 500);
    check(Variant::Generic, 8, 200, 12, Decoder::Ld, 500);
}

#[test]
fn dyadic_unique_roundtrips() {
    check(Variant::Dyadic, 6, 56, 8, Decoder::Ud, 500);
    check(Variant::Dyadic, 8, 240, 16, Decoder::Ud, 500);
}

#[test]
fn dyadic_list_roundtrips() {
    check(Variant::Dyadic, 6, 56, 8, Decoder::Ld, 500);
    check(Variant::Dyadic, 8, 240, 16, Decoder::Ld, 500);
}
