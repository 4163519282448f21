//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;

use goppa_ld::binmat::{BinMatrix, BitVector};
use goppa_ld::decode::{list_decode, patterson_decode, sphere_oracle};
use goppa_ld::dyadic::{compact_pubkey, expand_pubkey, gen_signature, public_redundancy, CompactKey};
use goppa_ld::field::{Elem, Field, Poly};
use goppa_ld::goppa::{verify_prop1, GoppaCode};
use goppa_ld::params::{
    bounds, recompute_ratios, recompute_table, reference_rows, render, search, Countermeasure,
    Method, SearchQuery, BOUNDS_HEADER, LEVELS, ROW_HEADER,
};
use goppa_ld::rng::{choose_positions, stream};
use goppa_ld::scheme::{check_dyadic_params, decrypt, encrypt, keygen, Decoder};
use goppa_ld::security::{check_countermeasures, fs_workfactor, gain_centi, radii, Variant};
use goppa_ld::Error;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn random_code(m: u32, n: usize, r: usize, label: &str) -> GoppaCode {
    let f = Field::new(m).unwrap();
    let mut rng = stream(label, b"code");
    loop {
        let mut c: Vec<Elem> = (0..r).map(|_| rng.gen_range(0..f.order()) as Elem).collect();
        c.push(1);
        let g = Poly::from_coeffs(c);
        if !g.is_squarefree(&f) {
            continue;
        }
        let pool: Vec<Elem> = f.elements().filter(|&a| g.eval(&f, a) != 0).collect();
        if pool.len() < n {
            continue;
        }
        let support = choose_positions(&mut rng, pool.len(), n)
            .into_iter()
            .map(|i| pool[i])
            .collect();
        return GoppaCode::build(f, support, g).unwrap();
    }
}

fn random_bits(rng: &mut impl Rng, len: usize) -> BitVector {
    BitVector::from_bits((0..len).map(|_| rng.gen::<bool>()))
}

fn all_rows() -> Vec<(u8, goppa_ld::params::CheckedRow)> {
    (1..=3u8)
        .flat_map(|t| recompute_table(t).unwrap().into_iter().map(move |c| (t, c)))
        .collect()
}

fn c1_keysize() -> Outcome {
    let rows = all_rows();
    let bad: Vec<String> = rows
        .iter()
        .filter(|(_, c)| c.row.keysize != c.reference.keysize)
        .map(|(t, c)| format!("table {t} n={}: {} vs {}", c.row.n, c.row.keysize, c.reference.keysize))
        .collect();
    ensure(bad.is_empty(), bad.join(", "))?;
    Ok(format!("{} keysizes reproduced exactly", rows.len()))
}

fn c2_tau2() -> Outcome {
    let mut matched = Vec::new();
    for t in 1..=3u8 {
        let ld: Vec<_> = recompute_table(t)
            .unwrap()
            .into_iter()
            .filter(|c| c.row.method == Method::Ld)
            .collect();
        for (i, c) in ld.iter().enumerate() {
            let (got, printed) = (c.row.tau2.unwrap(), c.reference.tau2.unwrap());
            if t == 3 && i == 0 {
                ensure(got == 270 && printed == 134, format!("table 3 LD row 1: {got} vs {printed}"))?;
                ensure(!c.is_match(), "table 3 LD row 1 should be flagged MISMATCH")?;
            } else {
                ensure(got == printed, format!("table {t} LD row {}: {got} vs {printed}", i + 1))?;
                matched.push(got);
            }
        }
    }
    ensure(
        matched == [41, 59, 66, 98, 133, 67, 134, 552, 134, 269, 539, 269, 542, 539, 1085],
        format!("{matched:?}"),
    )?;
    Ok("15 LD radii reproduced; table 3 LD row 1 flagged (270 vs 134)".into())
}

fn c3_workfactor() -> Outcome {
    let mut worst = (0.0f64, String::new());
    let mut misses = 0;
    let mut total = 0;
    for t in 1..=3u8 {
        for row in reference_rows(t).unwrap() {
            let w = row.tau2.unwrap_or(row.r);
            let wf = fs_workfactor(row.n, row.k, w).unwrap();
            let dev = wf - row.wf;
            total += 1;
            if dev.abs() > 1.0 {
                misses += 1;
            }
            if dev.abs() > worst.0.abs() {
                worst = (dev, format!("table {t} n={} k={} w={w}", row.n, row.k));
            }
        }
    }
    ensure(
        misses == 0,
        format!(
            "{misses}/{total} printed workfactors off by more than 1 bit; worst {:+.3} at {}",
            worst.0, worst.1
        ),
    )?;
    Ok(format!("{total} workfactors within 1 bit"))
}

fn c4_gain() -> Outcome {
    let mut got = Vec::new();
    for (t, c) in all_rows() {
        if let (Some(a), Some(b)) = (c.row.gain, c.reference.gain) {
            ensure(
                (a * 100.0).round() == (b * 100.0).round(),
                format!("table {t} n={}: {a:.2} vs {b:.2}", c.row.n),
            )?;
            got.push(format!("{a:.2}"));
        }
    }
    let want = [
        "4.43", "3.23", "2.81", "3.78", "3.11", "5.88", "9.09", "21.21", "7.69", "10.00", "14.29",
        "0.00", "14.29", "14.29", "0.00", "14.29",
    ];
    ensure(got == want, format!("{got:?}"))?;
    ensure(gain_centi(661_122, 631_840) == 443, "gain helper")?;
    Ok(format!("{} gains reproduced", got.len()))
}

fn c5_ratios() -> Outcome {
    let rows = recompute_ratios().unwrap();
    let got: Vec<u64> = rows.iter().map(|(r, _)| r.ratio).collect();
    ensure(got == [110, 65, 60, 39, 30], format!("{got:?}"))?;
    ensure(rows.iter().all(|(a, b)| a == b), "ratio rows differ from the printed table")?;
    Ok("ratios 11.0 6.5 6.0 3.9 3.0".into())
}

fn c6_prop1() -> Outcome {
    let mut rng = stream("acceptance-prop1", b"");
    let mut count = 0;
    for m in [4u32, 5, 6] {
        let f = Field::new(m).unwrap();
        let q = f.order() as usize;
        let mut done = 0;
        while done < 34 {
            let r = rng.gen_range(1..=(q - 1) / m as usize).min(4);
            let mut c: Vec<Elem> = (0..r).map(|_| rng.gen_range(0..q) as Elem).collect();
            c.push(1);
            let g = Poly::from_coeffs(c);
            if !g.is_squarefree(&f) {
                continue;
            }
            let pool: Vec<Elem> = f.elements().filter(|&a| g.eval(&f, a) != 0).collect();
            let lo = m as usize * r + 1;
            if pool.len() < lo {
                continue;
            }
            let n = rng.gen_range(lo..=pool.len());
            let support: Vec<Elem> = choose_positions(&mut rng, pool.len(), n)
                .into_iter()
                .map(|i| pool[i])
                .collect();
            ensure(
                verify_prop1(f, &support, &g).unwrap(),
                format!("m={m} n={n} G={:?}", g.coeffs()),
            )?;
            done += 1;
        }
        count += done;
    }
    Ok(format!("{count} instances satisfy the identity"))
}

fn c7_patterson() -> Outcome {
    for (m, n, r) in [(6u32, 64usize, 6usize), (8, 200, 12)] {
        let code = random_code(m, n, r, "acceptance-patterson");
        let mut rng = stream("acceptance-patterson", &[m as u8]);
        for i in 0..500 {
            let c = code.encode(&random_bits(&mut rng, code.k())).unwrap();
            let e = BitVector::from_positions(n, &choose_positions(&mut rng, n, r));
            let res = patterson_decode(&code, &c.xor(&e)).map_err(|e| format!("{m}/{n}/{r} #{i}: {e}"))?;
            ensure(
                res.len() == 1 && res.candidates[0].codeword == c,
                format!("{m}/{n}/{r} #{i}: wrong result"),
            )?;
        }
    }
    Ok("1000/1000 corrected".into())
}

fn c8_oracle() -> Outcome {
    let code = random_code(5, 32, 4, "acceptance-oracle");
    let tau = radii(32, 4).unwrap().ld_errors as usize;
    ensure(tau == 5, format!("radius {tau}"))?;
    let mut rng = stream("acceptance-oracle", b"words");
    let mut beyond = 0;
    for i in 0..200 {
        let y = match i % 4 {
            0 => random_bits(&mut rng, 32),
            _ => {
                let c = code.encode(&random_bits(&mut rng, code.k())).unwrap();
                let w = if i % 4 == 3 { rng.gen_range(0..=tau) } else { 5 };
                c.xor(&BitVector::from_positions(32, &choose_positions(&mut rng, 32, w)))
            }
        };
        let got = list_decode(&code, &y, tau).map_err(|e| e.to_string())?;
        let want = sphere_oracle(&code, &y, tau).map_err(|e| e.to_string())?;
        ensure(got == want, format!("word {i}: {} vs {} candidates", got.len(), want.len()))?;
        let nearest = sphere_oracle(&code, &y, 32).unwrap().candidates[0].error_weight;
        if nearest == 5 {
            beyond += 1;
        }
    }
    ensure(beyond > 0, "no word at distance r+1 from the code")?;
    Ok(format!("200 lists equal the oracle; {beyond} words at distance r+1"))
}

fn c9_witness() -> Outcome {
    let kp = keygen(Variant::Generic, 5, 32, 4, Decoder::Ld, b"witness").unwrap();
    ensure(kp.public.params.w == 5, "weight")?;
    let mut rng = stream("acceptance-witness", b"");
    for i in 0u32..100 {
        let msg = random_bits(&mut rng, kp.public.params.payload_capacity());
        let ct = encrypt(&kp.public, &msg, &i.to_be_bytes()).unwrap();
        let code = &kp.secret.code;
        let mut y = BitVector::zeros(32);
        for j in ct.vector.ones() {
            y.set(code.colperm()[j], true);
        }
        let unique_fails = match patterson_decode(code, &y) {
            Ok(res) => res.is_empty(),
            Err(_) => true,
        };
        if unique_fails && decrypt(&kp.secret, &ct) == Ok(msg) {
            return Ok(format!("ciphertext {i}: Patterson fails at weight 5, list decryption recovers"));
        }
    }
    Err("no witness in 100 ciphertexts".into())
}

fn c10_dyadic() -> Outcome {
    let f = Field::new(9).unwrap();
    for s in 0u8..50 {
        let sig = gen_signature(f, 256, &[s]).unwrap();
        ensure(sig.identity_holds_everywhere(), format!("identity, seed {s}"))?;
        for i in 0..256 {
            for j in 0..256 {
                let c = f.inv(sig.z(i) ^ sig.u(j)).map_err(|e| e.to_string())?;
                ensure(c == sig.h()[i ^ j], format!("Cauchy entry ({i},{j}), seed {s}"))?;
            }
        }
    }
    let kp = keygen(Variant::Dyadic, 11, 1728, 64, Decoder::Ld, b"compact").unwrap();
    let key = compact_pubkey(&kp.secret.code, 64).unwrap();
    ensure((key.len() - 9) * 8 == 11 * 1024, format!("payload {} bits", (key.len() - 9) * 8))?;
    ensure(
        expand_pubkey(&key).unwrap() == public_redundancy(&kp.secret.code),
        "expand(compact(A)) != A",
    )?;
    let mut rng = stream("acceptance-compact", b"");
    let sigs = (0..3 * 16)
        .map(|_| random_bits(&mut rng, 1024))
        .collect();
    let big = CompactKey { m: 16, r: 1024, k: 3072, sigs };
    let a: BinMatrix = big.expand();
    let back = CompactKey::from_redundancy(&a, 16, 1024).unwrap();
    ensure(back == big && big.payload_bits() == 49152, "m=16 k=3072 compact key")?;
    Ok("50 signatures at N=256; payloads 11264 and 49152 bits; expand(compact) = id".into())
}

fn c11_countermeasures() -> Outcome {
    for (m, n, r) in [(12u32, 3072usize, 32usize), (11, 1920, 32), (13, 4224, 64)] {
        let res = keygen(Variant::Dyadic, m, n, r, Decoder::Ud, b"gate");
        ensure(
            matches!(res, Err(Error::Countermeasure(_))),
            format!("({m},{n},{r}) was not refused"),
        )?;
    }
    for (t, cm) in [(2u8, Countermeasure::Cm1), (3, Countermeasure::Cm2)] {
        for row in reference_rows(t).unwrap() {
            let (m, n, r) = (row.m, row.n as usize, row.r as usize);
            ensure(cm.holds(m as u64, row.n, row.r), format!("table {t} n={n}: {cm:?} fails"))?;
            check_dyadic_params(m, n, r).map_err(|e| format!("table {t} n={n}: {e}"))?;
        }
    }
    ensure(check_countermeasures(11, 1792, 64).cm1, "cm1 example")?;
    let kp = keygen(Variant::Dyadic, 11, 1792, 64, Decoder::Ud, b"table2").map_err(|e| e.to_string())?;
    ensure(kp.public.params.keysize_bits() == 11968, "11 * 1088 key bits")?;
    Ok("3 insecure sets refused; 21 table rows accepted; 11/1792/64 key is 11968 bits".into())
}

fn c12_search() -> Outcome {
    let dyadic = [11264u64, 13312, 18432, 29952, 46080];
    let generic = [631_840u64, 1_475_712, 1_935_960, 5_018_208, 8_987_420];
    let mut found = Vec::new();
    for (variant, cm, limits) in [
        (Variant::Dyadic, Countermeasure::Cm1, dyadic),
        (Variant::Generic, Countermeasure::None, generic),
    ] {
        for (level, limit) in LEVELS.iter().zip(limits) {
            let q = SearchQuery {
                target_wf: *level as f64,
                variant,
                decoder: Decoder::Ld,
                countermeasure: cm,
            };
            let row = search(&q)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("{variant} {level}: no solution"))?;
            ensure(row.wf >= *level as f64, format!("{variant} {level}: wf {}", row.wf))?;
            ensure(cm.holds(row.m as u64, row.n, row.r), format!("{variant} {level}: {cm:?}"))?;
            ensure(
                row.keysize <= limit,
                format!("{variant} {level}: keysize {} > {limit}", row.keysize),
            )?;
            found.push(row.keysize.to_string());
        }
    }
    Ok(format!("keysizes {}", found.join(" ")))
}

fn c13_determinism() -> Outcome {
    let run = || -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for (variant, m, n, r) in [(Variant::Generic, 6u32, 64usize, 6usize), (Variant::Dyadic, 8, 240, 16)] {
            let kp = keygen(variant, m, n, r, Decoder::Ld, b"det").unwrap();
            out.push(kp.to_bytes());
            let msg = BitVector::from_bits((0..kp.public.params.payload_capacity()).map(|i| i % 3 == 0));
            out.push(encrypt(&kp.public, &msg, b"det").unwrap().to_bytes());
        }
        for t in 1..=3 {
            let rows = recompute_table(t).unwrap();
            out.push(render(&ROW_HEADER, rows.iter().map(|c| c.row.fields()), ',').into_bytes());
        }
        let q = SearchQuery {
            target_wf: 80.0,
            variant: Variant::Dyadic,
            decoder: Decoder::Ld,
            countermeasure: Countermeasure::Cm1,
        };
        out.push(render(&ROW_HEADER, [search(&q).unwrap().unwrap().fields()], ',').into_bytes());
        let b = bounds(1000, 100).unwrap();
        out.push(render(&BOUNDS_HEADER, b.iter().map(|r| r.fields()), ',').into_bytes());
        out
    };
    let (a, b) = (run(), run());
    ensure(a == b, "outputs differ between runs")?;
    Ok(format!("{} artifacts byte-identical across two runs", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("keysize exactness", c1_keysize),
        ("tau2 column", c2_tau2),
        ("workfactor calibration", c3_workfactor),
        ("gain column", c4_gain),
        ("DLP ratio table", c5_ratios),
        ("Goppa code squaring identity", c6_prop1),
        ("Patterson roundtrip", c7_patterson),
        ("list decoder equals sphere oracle", c8_oracle),
        ("beyond-unique witness", c9_witness),
        ("dyadic structure", c10_dyadic),
        ("countermeasure gate", c11_countermeasures),
        ("search dominance", c12_search),
        ("determinism", c13_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
