//! Acceptance suite: one test per claim the tool is expected to reproduce,
//! each printing a single pass line (visible with `--nocapture`) and
//! enforcing its runtime budget where one is stated.
//!
//! Run with: cargo test -p qchan-cli --test acceptance

use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use qchan_core::catalog::{epsilon3, epsilon4, named_unitary, UnitarySpec};
use qchan_core::channel::{haar_unitary, mix, random_channel, unitary_channel, KrausSet};
use qchan_core::choi::{choi_of, choi_rank, minimize};
use qchan_core::extremal::{
    is_extreme_cpt, is_extreme_ucp, is_extreme_ucpt, is_extreme_ucpt_by_gram, ucpt_criterion_gram,
    ucpt_rank_bound, ucpt_rank_bound_coarse, DecisionPath, Verdict,
};
use qchan_core::gram::{gram, linear_independence};
use qchan_core::matrix::ComplexMatrix;
use qchan_core::TolerancePolicy;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn pass(criterion: &str, detail: &str, elapsed: Duration) {
    println!(
        "PASS {criterion}: {detail} ({:.2} s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn acceptance_01_eps3_fixture() {
    let start = Instant::now();
    let tol = tol();
    let k = epsilon3().kraus;

    let class = k.classify(&tol);
    assert!(class.is_ucpt(), "eps3 classifies UCPT");
    assert!(class.trace_preserving.residual <= 1e-12);
    assert!(class.unital.residual <= 1e-12);
    assert_eq!(choi_rank(&k, &tol).unwrap(), 4);
    assert_eq!(is_extreme_ucpt(&k, &tol).unwrap().verdict, Verdict::Extreme);
    assert_eq!(
        is_extreme_cpt(&k, &tol).unwrap().verdict,
        Verdict::NotExtreme
    );

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "runtime budget 1 s");
    pass(
        "criterion 1",
        "eps3 is UCPT, Choi rank 4, extreme UCPT, not extreme CPT",
        elapsed,
    );
}

#[test]
fn acceptance_02_eps4_fixture() {
    let start = Instant::now();
    let tol = tol();
    let k = epsilon4().kraus;

    let class = k.classify(&tol);
    assert!(class.is_ucpt(), "eps4 classifies UCPT");
    assert!(class.trace_preserving.residual <= 1e-12);
    assert!(class.unital.residual <= 1e-12);
    let cr = choi_rank(&k, &tol).unwrap();
    assert_eq!(cr, 5);
    assert_eq!(is_extreme_ucpt(&k, &tol).unwrap().verdict, Verdict::Extreme);

    let bound = ucpt_rank_bound(4);
    assert!((bound - 5.5678).abs() < 5e-5, "sqrt(31) to four decimals");
    assert!((cr as f64) < bound, "rank bound respected");

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "runtime budget 1 s");
    pass(
        "criterion 2",
        "eps4 is UCPT, Choi rank 5, extreme UCPT, below sqrt(31)",
        elapsed,
    );
}

#[test]
fn acceptance_03_counterexample_suite() {
    let start = Instant::now();
    let tol = tol();
    let fixtures = [(3usize, epsilon3().kraus), (4usize, epsilon4().kraus)];
    let rank_of = |n: usize| if n == 3 { 4usize } else { 5 };

    for (n, left) in &fixtures {
        for (m, right) in &fixtures {
            let t = left.tensor(right);
            let dim = n * m;
            assert!(t.classify(&tol).is_ucpt(), "({n},{m}) tensor is UCPT");
            let cr = choi_rank(&t, &tol).unwrap();
            assert_eq!(cr, rank_of(*n) * rank_of(*m), "exact rank multiplicativity");
            assert!(
                (cr as f64) > ucpt_rank_bound_coarse(dim),
                "({n},{m}): rank exceeds sqrt(2)*dim"
            );
            assert_eq!(
                is_extreme_ucpt(&t, &tol).unwrap().verdict,
                Verdict::NotExtreme,
                "({n},{m}) tensor is not extreme"
            );
        }
    }

    // Independent confirmation for (3,3) by the full Gram test: 256
    // direct-sum vectors inside a 162-dimensional space.
    let t33 = fixtures[0].1.tensor(&fixtures[0].1);
    let full = is_extreme_ucpt_by_gram(&t33, &tol).unwrap();
    assert_eq!(full.verdict, Verdict::NotExtreme);
    assert_eq!(full.decided_by, Some(DecisionPath::GramTest));
    let diag = full.diagnostics.unwrap();
    assert_eq!(diag.order, 256);
    assert!(diag.rank < 256);
    assert!(diag.rank <= 162);

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "runtime budget 30 s");
    pass(
        "criterion 3",
        "all four eps_n(x)eps_m tensors are UCPT, rank-multiplicative and non-extreme; (3,3) confirmed by full Gram",
        elapsed,
    );
}

/// 20 seeded random TP channels per shape that individually pass the CPT
/// extremality test (seeds advance until 20 are found).
fn extreme_corpus() -> Vec<KrausSet> {
    let tol = tol();
    let mut corpus = Vec::with_capacity(60);
    for (dim_in, dim_out, rank, base) in [
        (2usize, 2usize, 2usize, 100_000u64),
        (3, 3, 2, 200_000),
        (3, 3, 3, 300_000),
    ] {
        let mut found = 0;
        let mut seed = base;
        while found < 20 {
            let k = random_channel(dim_in, dim_out, rank, seed).unwrap();
            if is_extreme_cpt(&k, &tol).unwrap().verdict == Verdict::Extreme {
                corpus.push(k);
                found += 1;
            }
            seed += 1;
            assert!(seed - base < 1000, "corpus generation ran away");
        }
    }
    corpus
}

#[test]
fn acceptance_04_cpt_preservation() {
    let start = Instant::now();
    let tol = tol();
    let corpus = extreme_corpus();
    assert_eq!(corpus.len(), 60);

    let mut failures = 0usize;
    for a in &corpus {
        for b in &corpus {
            let t = a.tensor(b);
            if is_extreme_cpt(&t, &tol).unwrap().verdict != Verdict::Extreme {
                failures += 1;
            }
        }
    }
    assert_eq!(failures, 0, "every pairwise tensor stays extreme CPT");

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "runtime budget 60 s");
    pass(
        "criterion 4",
        "3600 pairwise tensors of extreme CPT channels all extreme, zero failures",
        elapsed,
    );
}

#[test]
fn acceptance_05_ucp_preservation_and_duality() {
    let start = Instant::now();
    let tol = tol();
    let corpus = extreme_corpus();
    let duals: Vec<KrausSet> = corpus.iter().map(KrausSet::dual).collect();

    // Every dual is extreme UCP (duality of the corpus property).
    for d in &duals {
        assert_eq!(is_extreme_ucp(d, &tol).unwrap().verdict, Verdict::Extreme);
    }

    // Tensors of extreme UCP maps stay extreme UCP.
    let mut failures = 0usize;
    for a in &duals {
        for b in &duals {
            let t = a.tensor(b);
            if is_extreme_ucp(&t, &tol).unwrap().verdict != Verdict::Extreme {
                failures += 1;
            }
        }
    }
    assert_eq!(failures, 0, "every pairwise tensor stays extreme UCP");

    // Verdict duality on every channel of the corpus and its dual corpus:
    // is_extreme_ucp(K) agrees exactly with is_extreme_cpt(dual(K)).
    for k in corpus.iter().chain(duals.iter()) {
        let ucp = is_extreme_ucp(k, &tol).unwrap().verdict;
        let cpt_of_dual = is_extreme_cpt(&k.dual(), &tol).unwrap().verdict;
        assert_eq!(ucp, cpt_of_dual, "exact verdict agreement");
    }

    let elapsed = start.elapsed();
    pass(
        "criterion 5",
        "UCP extremality preserved under tensor on the dual corpus; UCP/CPT verdict duality exact on all 120 channels",
        elapsed,
    );
}

/// Seeded mixture of `parts` Haar unitaries with strictly positive weights.
fn unitary_mixture(dim: usize, parts: usize, seed: u64) -> KrausSet {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let channels: Vec<KrausSet> = (0..parts)
        .map(|_| unitary_channel(&haar_unitary(dim, rng.random::<u64>())).unwrap())
        .collect();
    let raw: Vec<f64> = (0..parts).map(|_| 0.1 + rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    mix(&channels, &weights).unwrap()
}

#[test]
fn acceptance_06_unitary_factor_invariance() {
    let start = Instant::now();
    let tol = tol();

    let mut cases: Vec<KrausSet> = vec![epsilon3().kraus, epsilon4().kraus];
    for seed in 0..3u64 {
        cases.push(unitary_mixture(3, 2 + seed as usize % 2, 400_000 + seed));
    }
    let mut unitaries: Vec<KrausSet> = vec![
        named_unitary(UnitarySpec::Fourier { dim: 2 })
            .unwrap()
            .kraus,
        named_unitary(UnitarySpec::Fourier { dim: 3 })
            .unwrap()
            .kraus,
    ];
    for (i, dim) in [2usize, 3, 4, 5, 6].into_iter().enumerate() {
        unitaries.push(unitary_channel(&haar_unitary(dim, 500_000 + i as u64)).unwrap());
    }

    for k in &cases {
        let expected = is_extreme_ucpt(k, &tol).unwrap().verdict;
        assert_ne!(expected, Verdict::NotApplicable);
        let minimal = minimize(k, &tol).unwrap();
        let g = ucpt_criterion_gram(&minimal, &tol).unwrap();
        for u in &unitaries {
            let t = minimal.tensor(u);
            assert_eq!(
                is_extreme_ucpt(&t, &tol).unwrap().verdict,
                expected,
                "unitary factor must not change the UCPT verdict"
            );
            let g_tensor = ucpt_criterion_gram(&t, &tol).unwrap();
            let scaled = g.matrix().scale(C64::new(u.dim_in() as f64, 0.0));
            let diff = g_tensor.matrix().max_abs_diff(&scaled);
            assert!(
                diff <= 1e-10,
                "criterion Gram scales by dim(Y), off by {diff}"
            );
        }
    }

    let elapsed = start.elapsed();
    pass(
        "criterion 6",
        "tensoring with 7 unitaries preserved every UCPT verdict and scaled the criterion Gram by dim(Y)",
        elapsed,
    );
}

#[test]
fn acceptance_07_dim2_extremes_are_unitary() {
    let start = Instant::now();
    let tol = tol();

    for case in 0..50u64 {
        let parts = 2 + (case % 3) as usize; // 2, 3 or 4 unitaries
        let m = unitary_mixture(2, parts, 600_000 + case);
        let cr = choi_rank(&m, &tol).unwrap();
        assert!(
            cr >= 2,
            "case {case}: mixture must not collapse to one unitary"
        );
        assert_eq!(
            is_extreme_ucpt(&m, &tol).unwrap().verdict,
            Verdict::NotExtreme,
            "case {case}: a qubit mixture of distinct unitaries is never extreme"
        );
    }
    for case in 0..50u64 {
        let u = unitary_channel(&haar_unitary(2, 700_000 + case)).unwrap();
        assert_eq!(
            is_extreme_ucpt(&u, &tol).unwrap().verdict,
            Verdict::Extreme,
            "case {case}: every qubit unitary channel is extreme"
        );
    }

    let elapsed = start.elapsed();
    pass(
        "criterion 7",
        "50 qubit unitary mixtures all non-extreme, 50 qubit unitaries all extreme",
        elapsed,
    );
}

/// Column rank of the stacked-vector matrix by Gaussian elimination with
/// partial pivoting; independent of the Gram/eigensolver path.
#[allow(clippy::needless_range_loop)]
fn elimination_column_rank(family: &[ComplexMatrix]) -> usize {
    let (nr, nc) = family[0].shape();
    let rows = nr * nc;
    let cols = family.len();
    let mut m: Vec<Vec<C64>> = (0..rows)
        .map(|r| (0..cols).map(|c| family[c].get(r / nc, r % nc)).collect())
        .collect();
    let scale = m
        .iter()
        .flat_map(|row| row.iter().map(|z| z.norm()))
        .fold(0.0f64, f64::max);
    let threshold = 1e-8 * scale.max(1.0);

    let mut rank = 0;
    for col in 0..cols {
        let (pivot_row, pivot_abs) =
            (rank..rows)
                .map(|r| (r, m[r][col].norm()))
                .fold(
                    (rank, 0.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_abs <= threshold {
            continue;
        }
        m.swap(rank, pivot_row);
        let pivot = m[rank][col];
        for r in rank + 1..rows {
            let factor = m[r][col] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for c in col..cols {
                let sub = factor * m[rank][c];
                m[r][c] -= sub;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha12Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    })
}

fn random_family(seed: u64) -> Vec<ComplexMatrix> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let rows = rng.random_range(2..=4usize);
    let cols = rng.random_range(2..=4usize);
    let ambient = rows * cols;
    let size = rng.random_range(1..=(ambient + 2).min(10));
    let mut family: Vec<ComplexMatrix> = (0..size)
        .map(|_| random_matrix(rows, cols, &mut rng))
        .collect();
    if size >= 2 && rng.random_range(0..3u8) == 0 {
        let victim = rng.random_range(0..size);
        let mut combo = ComplexMatrix::zeros(rows, cols);
        for (i, member) in family.iter().enumerate() {
            if i != victim {
                let coeff = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                combo = &combo + &member.scale(coeff);
            }
        }
        family[victim] = combo;
    }
    family
}

#[test]
fn acceptance_08_gram_lemma_suite() {
    let start = Instant::now();
    let tol = tol();

    // Independence verdicts agree with the elimination oracle.
    for seed in 0..100u64 {
        let family = random_family(800_000 + seed);
        let g = gram(&family).unwrap();
        let gram_rank = g.numerical_rank(&tol).unwrap();
        let oracle = elimination_column_rank(&family);
        assert_eq!(gram_rank, oracle, "seed {seed}");
        assert_eq!(
            linear_independence(&family, &tol).unwrap(),
            oracle == family.len(),
            "seed {seed}"
        );
    }

    // Kronecker-Gram factorization and the tensor rank product law.
    let mut rng = ChaCha12Rng::seed_from_u64(900_000);
    for round in 0..30 {
        let n = rng.random_range(1..=3usize);
        let m = rng.random_range(1..=3usize);
        let left: Vec<ComplexMatrix> = (0..n).map(|_| random_matrix(2, 2, &mut rng)).collect();
        let right: Vec<ComplexMatrix> = (0..m).map(|_| random_matrix(2, 3, &mut rng)).collect();
        let mut tensored = Vec::new();
        for v in &left {
            for w in &right {
                tensored.push(v.kronecker(w));
            }
        }
        let g_left = gram(&left).unwrap();
        let g_right = gram(&right).unwrap();
        let g_tensor = gram(&tensored).unwrap();
        let expected = g_left.matrix().kronecker(g_right.matrix());
        assert!(
            g_tensor.matrix().max_abs_diff(&expected) <= 1e-12,
            "round {round}: Kronecker-Gram factorization"
        );
        let rank_left = g_left.numerical_rank(&tol).unwrap();
        let rank_right = g_right.numerical_rank(&tol).unwrap();
        if rank_left == n && rank_right == m {
            assert_eq!(
                g_tensor.numerical_rank(&tol).unwrap(),
                n * m,
                "round {round}: rank product law"
            );
        }
    }

    let elapsed = start.elapsed();
    pass(
        "criterion 8",
        "100 oracle agreements, 30 Kronecker-Gram factorizations and rank products",
        elapsed,
    );
}

#[test]
fn acceptance_09_cj_suite() {
    let start = Instant::now();
    let tol = tol();

    // Round trips and the partial-trace invariant.
    let mut rng = ChaCha12Rng::seed_from_u64(1_000_000);
    for case in 0..100u32 {
        let dim_in = rng.random_range(2..=4usize);
        let dim_out = rng.random_range(2..=4usize);
        let min_rank = dim_in.div_ceil(dim_out);
        let rank = rng.random_range(min_rank..=dim_in * dim_out);
        let k = random_channel(dim_in, dim_out, rank, 1_000_100 + case as u64).unwrap();
        let c = choi_of(&k);
        let m = c.minimal_kraus(&tol).unwrap();
        let diff = choi_of(&m).matrix().max_abs_diff(c.matrix());
        assert!(diff <= 1e-8, "case {case}: round trip off by {diff}");
        assert!(
            c.partial_trace_out().identity_residual() <= 1e-10,
            "case {case}: TP partial trace"
        );
    }

    // Exact Choi-rank multiplicativity.
    for case in 0..50u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(1_100_000 + case);
        let d1 = rng.random_range(2..=3usize);
        let d2 = rng.random_range(2..=3usize);
        let r1 = rng.random_range(1..=d1);
        let r2 = rng.random_range(1..=d2);
        let a = random_channel(d1, d1, r1, 1_200_000 + 2 * case).unwrap();
        let b = random_channel(d2, d2, r2, 1_200_001 + 2 * case).unwrap();
        let cr_a = choi_rank(&a, &tol).unwrap();
        let cr_b = choi_rank(&b, &tol).unwrap();
        let cr_t = choi_rank(&a.tensor(&b), &tol).unwrap();
        assert_eq!(cr_t, cr_a * cr_b, "case {case}");
    }

    let elapsed = start.elapsed();
    pass(
        "criterion 9",
        "100 CJ round trips within 1e-8 with TP partial traces, 50 exact rank products",
        elapsed,
    );
}

#[test]
fn acceptance_10_cli_round_trips() {
    let start = Instant::now();
    let qchan = env!("CARGO_BIN_EXE_qchan");
    let run = |args: &[&str]| {
        std::process::Command::new(qchan)
            .args(args)
            .output()
            .expect("binary runs")
    };

    // Counterexample self-check exits 0.
    let out = run(&["counterexample"]);
    assert!(out.status.success(), "counterexample must exit 0");

    // analyze / tensor / dual emit byte-stable JSON across two runs.
    for args in [
        vec!["analyze", "--builtin", "eps3"],
        vec!["analyze", "--builtin", "eps4"],
        vec!["tensor", "builtin:eps3", "builtin:eps4"],
        vec!["dual", "builtin:eps3"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert!(first.status.success());
        assert_eq!(
            first.stdout, second.stdout,
            "byte-unstable output: {args:?}"
        );
    }

    // Tensor/dual round trip through files parses back to the same kraus data.
    let dir = tempfile::tempdir().unwrap();
    let f1 = dir.path().join("a.json");
    let f2 = dir.path().join("b.json");
    assert!(run(&[
        "tensor",
        "builtin:eps3",
        "builtin:id:2",
        "-o",
        f1.to_str().unwrap()
    ])
    .status
    .success());
    assert!(
        run(&["dual", f1.to_str().unwrap(), "-o", f2.to_str().unwrap()])
            .status
            .success()
    );
    let a: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&f1).unwrap()).unwrap();
    let b: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&f2).unwrap()).unwrap();
    assert_eq!(a["dim_in"], b["dim_out"]);
    assert_eq!(
        a["kraus"].as_array().unwrap().len(),
        b["kraus"].as_array().unwrap().len()
    );

    let elapsed = start.elapsed();
    pass(
        "criterion 10",
        "counterexample exits 0; analyze/tensor/dual byte-stable across runs",
        elapsed,
    );
}
