//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::ThreadPoolBuilder;

use quasiuniform::claims::{
    check_hockey_stick_parity, check_ss07_bound, mesh_ratio_scan, theorem_lengths, verify_theorem,
    DEFAULT_SCALE_CAP,
};
use quasiuniform::digitalseq::{digital_point, prefix, sobol2d_spec};
use quasiuniform::gf2matrix::{binomial_parity, row_parity_all_odd};
use quasiuniform::greedypack::{greedy_sequence, DEFAULT_GREEDY_TOL};
use quasiuniform::io::{write_claims_csv, write_point_set_csv, write_reports_csv, ClaimRow};
use quasiuniform::pointgeom::{
    fill_distance, mesh_ratio_real, separation, RealPoints, DEFAULT_FILL_TOL,
};
use quasiuniform::PointSet;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    check(
        elapsed < limit,
        format!("{what} took {elapsed:?}, limit {limit:?}"),
    )
}

/// 1. Exact separation identity for w = 2, 3, 4.
fn theorem_exactness() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for w in 2..=4 {
        let c = verify_theorem(w, DEFAULT_SCALE_CAP).map_err(|e| e.to_string())?;
        let half = (1u64 << (c.m - 1)) - 1;
        check(
            c.passed && c.s == 2,
            format!("w={w}: s={} at precision {}", c.s, c.m),
        )?;
        check(
            c.proof_pair_s == 2,
            format!("w={w}: pair (1, n-1) has s={}", c.proof_pair_s),
        )?;
        check(
            c.last_point_ok,
            format!("w={w}: x_(n-1) mantissas differ from {half}"),
        )?;
        check(
            c.permutation_ok && c.nonsingular_ok,
            format!("w={w}: permutation property"),
        )?;
        check(
            c.closed_form_holds(),
            format!("w={w}: s (n+1)^2 != 2^(2m+1)"),
        )?;
        notes.push(format!("n={} s=2", c.n));
    }
    within(start.elapsed(), Duration::from_secs(10), "theorem checks")?;
    Ok(notes.join(", "))
}

/// 2. Row parity for m = 2^w - 1 and the hockey-stick parity identity.
fn lemma() -> Outcome {
    let start = Instant::now();
    for w in 1..=6 {
        check(
            row_parity_all_odd((1 << w) - 1).unwrap(),
            format!("row parity fails at w={w}"),
        )?;
    }
    check(
        check_hockey_stick_parity(64).unwrap(),
        "hockey-stick parity fails",
    )?;
    within(start.elapsed(), Duration::from_secs(1), "lemma checks")?;
    Ok("w=1..6, m<=64".into())
}

/// 3. Bitwise binomial parity against exact Pascal-triangle binomials.
fn lucas_oracle() -> Outcome {
    let mut row = vec![BigUint::from(1u32)];
    let mut cases = 0usize;
    let two = BigUint::from(2u32);
    for n in 0..=256u64 {
        for (k, c) in row.iter().enumerate() {
            let exact = (c % &two == BigUint::from(1u32)) as u8;
            check(
                binomial_parity(n, k as u64) == exact,
                format!("mismatch at C({n}, {k})"),
            )?;
            cases += 1;
        }
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::from(1u32));
        for k in 1..row.len() {
            next.push(&row[k - 1] + &row[k]);
        }
        next.push(BigUint::from(1u32));
        row = next;
    }
    check(cases > 33_000, format!("only {cases} cases"))?;
    Ok(format!("{cases} cases, 0 mismatches"))
}

/// 4. Known points and the bit-reversal first coordinate.
fn known_points() -> Outcome {
    let s = sobol2d_spec();
    check(
        digital_point(&s, 1, 3).unwrap().mantissas() == [4, 4],
        "x_1 != (1/2, 1/2)",
    )?;
    check(
        digital_point(&s, 6, 3).unwrap().mantissas() == [3, 3],
        "x_6 != (3/8, 3/8)",
    )?;
    let ps = prefix(&s, 1 << 16, 16).unwrap();
    for n in 0..1u64 << 16 {
        let mut reversed = 0u64;
        for bit in 0..16 {
            reversed |= ((n >> bit) & 1) << (15 - bit);
        }
        check(
            ps.coords(n as usize)[0] == reversed,
            format!("first coordinate of x_{n}"),
        )?;
    }
    Ok("x_1, x_6, 65536 radical inverses".into())
}

/// 5. Mesh ratio grows along n = 7, 127, 32767.
fn non_quasi_uniformity() -> Outcome {
    let start = Instant::now();
    let ns = theorem_lengths([2, 3, 4]);
    let reports =
        mesh_ratio_scan(&sobol2d_spec(), &ns, DEFAULT_FILL_TOL).map_err(|e| e.to_string())?;
    for r in &reports {
        let width = r.fill.h_hi - r.fill.h_lo;
        check(
            width <= 1e-6,
            format!("n={}: fill interval width {width}", r.n),
        )?;
    }
    let lo: Vec<f64> = reports.iter().map(|r| r.ratio_lo).collect();
    check(
        lo.windows(2).all(|w| w[0] < w[1]),
        format!("ratio_lo not increasing: {lo:?}"),
    )?;
    check(
        lo[2] > 5.0 * lo[0],
        format!("ratio_lo(32767)={} <= 5 x {}", lo[2], lo[0]),
    )?;
    within(start.elapsed(), Duration::from_secs(300), "scan")?;
    Ok(format!(
        "ratio_lo = {:.3}, {:.3}, {:.3}",
        lo[0], lo[1], lo[2]
    ))
}

/// 6. Halved lower bound holds up to 4096; the literal one fails at 7.
fn ss07_bound() -> Outcome {
    let halved = check_ss07_bound(4096, true).map_err(|e| e.to_string())?;
    check(
        halved.is_empty(),
        format!(
            "halved form violated at {:?}",
            &halved[..halved.len().min(10)]
        ),
    )?;
    let literal = check_ss07_bound(4096, false).map_err(|e| e.to_string())?;
    check(literal.contains(&7), "literal form not violated at n=7")?;
    Ok(format!(
        "halved: 0 violations; literal: {} violations incl. n=7",
        literal.len()
    ))
}

fn random_dyadic_set(rng: &mut ChaCha8Rng, n: usize, dim: usize, p: u32) -> PointSet {
    let flat = (0..n * dim).map(|_| rng.gen_range(0..1u64 << p)).collect();
    PointSet::from_flat(flat, dim, p, "random").unwrap()
}

fn brute_force_pair(ps: &PointSet) -> (u128, usize, usize) {
    let mut best = (u128::MAX, 0, 0);
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            let s: u128 = ps
                .coords(i)
                .iter()
                .zip(ps.coords(j))
                .map(|(&a, &b)| {
                    let d = a as i128 - b as i128;
                    (d * d) as u128
                })
                .sum();
            if s < best.0 {
                best = (s, i, j);
            }
        }
    }
    best
}

/// Max over the grid `{k / 2^11}^2` of the distance to the nearest point.
fn fine_grid_fill(points: &[f64]) -> f64 {
    use rayon::prelude::*;
    let k = 1usize << 11;
    (0..=k)
        .into_par_iter()
        .map(|a| {
            let x = a as f64 / k as f64;
            let mut row_best: f64 = 0.0;
            for b in 0..=k {
                let y = b as f64 / k as f64;
                let mut d2 = f64::INFINITY;
                for p in points.chunks_exact(2) {
                    d2 = d2.min((p[0] - x).powi(2) + (p[1] - y).powi(2));
                }
                row_best = row_best.max(d2);
            }
            row_best
        })
        .reduce(|| 0.0, f64::max)
        .sqrt()
}

/// 7. Separation, fill and volume-bound oracles on random sets.
fn geometry_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for t in 0..200 {
        let dim = 1 + t % 3;
        let n = rng.gen_range(2..=200);
        let p = rng.gen_range(1..=20);
        let ps = random_dyadic_set(&mut rng, n, dim, p);
        let got = separation(&ps).unwrap();
        let (s, i, j) = brute_force_pair(&ps);
        check(
            (got.s, got.witness) == (s, (i, j)),
            format!(
                "set {t}: separation {:?} vs oracle {:?}",
                (got.s, got.witness),
                (s, i, j)
            ),
        )?;
    }
    // Larger sets take the grid-bucketed path.
    for t in 0..6 {
        let n = 1500 + 400 * t;
        let ps = random_dyadic_set(&mut rng, n, 2, 24);
        let got = separation(&ps).unwrap();
        check(
            (got.s, got.witness.0, got.witness.1) == brute_force_pair(&ps),
            format!("grid-path set {t} disagrees with oracle"),
        )?;
    }

    let slack = 2f64.sqrt() / 2.0 / (1u64 << 11) as f64;
    let mut worst_width: f64 = 0.0;
    for t in 0..50 {
        let n = rng.gen_range(1..=64);
        let ps = random_dyadic_set(&mut rng, n, 2, 20);
        let tol = 1e-9;
        let fill = fill_distance(&ps, tol).unwrap();
        let grid = fine_grid_fill(&ps.to_f64_flat());
        check(
            fill.h_hi - fill.h_lo <= tol,
            format!("set {t}: width {}", fill.h_hi - fill.h_lo),
        )?;
        check(
            grid <= fill.h_hi + 1e-12 && fill.h_lo <= grid + slack,
            format!(
                "set {t}: grid estimate {grid} vs [{}, {}]",
                fill.h_lo, fill.h_hi
            ),
        )?;
        check(
            fill.h_hi >= 1.0 / (std::f64::consts::PI * n as f64).sqrt(),
            format!("set {t}: volume bound violated"),
        )?;
        worst_width = worst_width.max(fill.h_hi - fill.h_lo);
    }
    let sobol = prefix(&sobol2d_spec(), 32767, 64).unwrap();
    for n in [2usize, 7, 64, 127, 1000, 4096, 32767] {
        let fill = fill_distance(&sobol.truncated(n), DEFAULT_FILL_TOL).unwrap();
        check(
            fill.h_hi >= 1.0 / (std::f64::consts::PI * n as f64).sqrt(),
            format!("sobol n={n}: volume bound violated"),
        )?;
    }
    Ok(format!(
        "200 + 6 separation sets, 50 fill sets (max width {worst_width:.1e})"
    ))
}

/// 8. Greedy packing keeps the mesh ratio at most 2 (+1e-5) up to n = 512.
fn greedy_baseline() -> Outcome {
    let points = greedy_sequence(2, 512, DEFAULT_GREEDY_TOL).map_err(|e| e.to_string())?;
    let mut worst = (0.0f64, 0usize);
    for n in 2..=512 {
        let r =
            mesh_ratio_real(&points.truncated(n), DEFAULT_FILL_TOL).map_err(|e| e.to_string())?;
        if r.ratio_hi > worst.0 {
            worst = (r.ratio_hi, n);
        }
    }
    check(
        worst.0 <= 2.0 + 1e-5,
        format!("ratio_hi {} at n={}", worst.0, worst.1),
    )?;
    Ok(format!("max ratio_hi = {:.9} (n={})", worst.0, worst.1))
}

/// CSV outputs of the other criteria, concatenated.
fn criterion_outputs() -> Vec<u8> {
    let mut out = Vec::new();
    let rows: Vec<ClaimRow> = (2..=4)
        .map(|w| ClaimRow::theorem(&verify_theorem(w, DEFAULT_SCALE_CAP).unwrap()))
        .collect();
    write_claims_csv(&rows, &mut out).unwrap();
    let reports = mesh_ratio_scan(
        &sobol2d_spec(),
        &theorem_lengths([2, 3, 4]),
        DEFAULT_FILL_TOL,
    )
    .unwrap();
    write_reports_csv(&reports, &mut out).unwrap();
    for halved in [true, false] {
        let v = check_ss07_bound(4096, halved).unwrap();
        out.extend_from_slice(format!("{v:?}\n").as_bytes());
    }
    write_point_set_csv(
        &prefix(&sobol2d_spec(), 5000, 64)
            .unwrap()
            .to_minimal_precision(),
        &mut out,
    )
    .unwrap();
    let greedy: RealPoints = greedy_sequence(2, 48, DEFAULT_GREEDY_TOL).unwrap();
    let greedy_reports: Vec<_> = (2..=48)
        .map(|n| mesh_ratio_real(&greedy.truncated(n), DEFAULT_FILL_TOL).unwrap())
        .collect();
    write_reports_csv(&greedy_reports, &mut out).unwrap();
    out
}

/// 9. Byte-identical outputs across repeated runs and thread counts.
fn determinism() -> Outcome {
    let mut outputs = Vec::new();
    for threads in [1, 2, 8, 1] {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        outputs.push((threads, pool.install(criterion_outputs)));
    }
    let (_, reference) = &outputs[0];
    for (threads, bytes) in &outputs[1..] {
        check(
            bytes == reference,
            format!("output differs with {threads} threads"),
        )?;
    }
    Ok(format!(
        "{} bytes identical over 4 runs (1, 2, 8, 1 threads)",
        reference.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 theorem exactness", theorem_exactness),
        ("2 parity lemma", lemma),
        ("3 lucas oracle", lucas_oracle),
        ("4 known points", known_points),
        ("5 non-quasi-uniformity", non_quasi_uniformity),
        ("6 ss07 bound", ss07_bound),
        ("7 geometry oracles", geometry_oracles),
        ("8 greedy baseline", greedy_baseline),
        ("9 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("[PASS] {name:<24} {secs:>7.2}s  {msg}"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {name:<24} {secs:>7.2}s  {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
