//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use oplaw::harness::gen::{gen_matrix, MatrixKind};
use oplaw::harness::rng::Stream;
use oplaw::harness::{chain, generate, run_suite, Instance, Suite, TrialConfig, TrialRng};
use oplaw::identities::{
    bohr_gap, field_bohr_gap, field_parallelogram, generalized_parallelogram, hilbert_schmidt_identity,
    lemma_parallelogram, lemma_polarization, two_term_identity, vector_identity, vector_weighted_identity,
    sum_of_squares_identity, OperatorField, WeightVector,
};
use oplaw::inequalities::{
    convex_combination_margins, schatten_weighted_ineq, superadditivity_margins, theorem_main_margins, Margin,
};
use oplaw::linalg::{hermitian_eig, CMatrix};
use oplaw::norms::{norm, NormSpec};

const TAU: f64 = 1e-10;
const SCALAR_ORACLE_TOL: f64 = 1e-14;
const RECONSTRUCTION_TOL: f64 = 1e-12;
const QUADRATIC_TOL: f64 = 1e-12;
const INVARIANCE_TOL: f64 = 1e-11;
const P_GRID: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const IDENTITY_SUITES: [Suite; 9] = [
    Suite::LemmaA,
    Suite::LemmaB,
    Suite::Thm22,
    Suite::CorOit,
    Suite::CorZf,
    Suite::RemarkN2,
    Suite::Eq4,
    Suite::Cor26,
    Suite::Eq00,
];
const GAP_SUITES: [Suite; 2] = [Suite::Bohr, Suite::BohrField];
const INEQUALITY_SUITES: [Suite; 5] =
    [Suite::Ineq41, Suite::Ineq42, Suite::Thm31Convex, Suite::Thm31Concave, Suite::Cor33];

fn run_grid(suites: &[Suite]) -> Outcome {
    let cfg = TrialConfig { suites: suites.to_vec(), p_grid: P_GRID.to_vec(), tol: TAU, ..Default::default() };
    let report = run_suite(&cfg).map_err(|e| e.to_string())?;
    let summary: Vec<String> = report
        .suites
        .iter()
        .map(|s| format!("{} {}/{} worst {:.2e}", s.id, s.trials - s.failures, s.trials, s.worst.unwrap_or(f64::NAN)))
        .collect();
    let line = format!("{} ms; {}", report.wall_ms, summary.join(", "));
    if report.passed {
        Ok(line)
    } else {
        Err(format!("{} failure(s); {line}", report.total_failures))
    }
}

// ---------------------------------------------------------------------------
// 1×1 oracle: every suite evaluated with plain complex arithmetic.

fn entry(m: &CMatrix) -> Complex64 {
    m[(0, 0)]
}

fn entries(ms: &[CMatrix]) -> Vec<Complex64> {
    ms.iter().map(entry).collect()
}

fn sq(z: Complex64) -> f64 {
    z.re * z.re + z.im * z.im
}

fn total(z: &[Complex64]) -> Complex64 {
    z.iter().sum()
}

/// `cᵢⱼ = √(rᵢ/rⱼ)`.
fn c(r: &[f64], i: usize, j: usize) -> f64 {
    (r[i] / r[j]).sqrt()
}

/// `Σ_{i<j}|cᵢⱼaᵢ − cⱼᵢaⱼ|²`.
fn pairwise(a: &[Complex64], r: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            s += sq(a[i] * c(r, i, j) - a[j] * c(r, j, i));
        }
    }
    s
}

/// `Σᵢⱼ|cᵢⱼaᵢ − cⱼᵢbⱼ|² − |Σ(aᵢ − bᵢ)|²`.
fn cross_minus_sum(a: &[Complex64], b: &[Complex64], r: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            s += sq(a[i] * c(r, i, j) - b[j] * c(r, j, i));
        }
    }
    s - sq(total(a) - total(b))
}

/// `(lib, oracle)` pairs of real scalars for one instance.
struct Comparison {
    pairs: Vec<(f64, f64)>,
}

impl Comparison {
    fn new() -> Self {
        Self { pairs: Vec::new() }
    }

    fn real(&mut self, lib: f64, oracle: f64) {
        self.pairs.push((lib, oracle));
    }

    /// A 1×1 matrix side: real part against the oracle, imaginary part against 0.
    fn matrix(&mut self, lib: &CMatrix, oracle: f64) {
        let z = entry(lib);
        self.pairs.push((z.re, oracle));
        self.pairs.push((z.im, 0.0));
    }

    fn margin(&mut self, lib: &Margin, lhs: f64, rhs: f64) {
        self.real(lib.lhs, lhs);
        self.real(lib.rhs, rhs);
    }

    /// Worst `|lib − oracle| / max(1, |oracle|)` with the absolute deviation
    /// and magnitude at that point, and how many values miss `tol` absolutely.
    fn worst(&self, tol: f64) -> (f64, f64, f64, usize) {
        let mut worst = (0.0, 0.0, 0.0, 0);
        for &(l, o) in &self.pairs {
            let dev = (l - o).abs();
            if dev > tol {
                worst.3 += 1;
            }
            let scaled = dev / o.abs().max(1.0);
            if scaled > worst.0 {
                worst = (scaled, dev, o.abs(), worst.3);
            }
        }
        worst
    }
}

fn oracle_compare(suite: Suite, inst: &Instance) -> oplaw::Result<Comparison> {
    let mut cmp = Comparison::new();
    match inst {
        Instance::Pair { a, b } => {
            let (x, y) = (entry(a), entry(b));
            if suite == Suite::LemmaA {
                let res = lemma_parallelogram(a, b)?;
                cmp.matrix(&res.lhs, sq(x + y) + sq(x - y));
                cmp.matrix(&res.rhs, 2.0 * sq(x) + 2.0 * sq(y));
            } else {
                let res = lemma_polarization(a, b)?;
                cmp.matrix(&res.lhs, sq(x + y) - sq(x - y));
                cmp.matrix(&res.rhs, 4.0 * (x.conj() * y).re);
            }
        }
        Instance::Field { a, b, measure, alpha } => {
            let (x, y) = (entries(a), entries(b));
            let w = measure.weights();
            let m = x.len();
            let (mut same, mut cross) = (0.0, 0.0);
            let mut mean = Complex64::new(0.0, 0.0);
            for k in 0..m {
                mean += (x[k] - y[k]) * w[k];
                for l in 0..m {
                    let (akl, alk) = (alpha.get(k, l), alpha.get(l, k));
                    let ww = w[k] * w[l];
                    same += ww * (sq(akl * x[k] - alk * x[l]) + sq(akl * y[k] - alk * y[l]));
                    cross += ww * sq(akl * x[k] - alk * y[l]);
                }
            }
            let (fa, fb) = (OperatorField::new(a.clone())?, OperatorField::new(b.clone())?);
            if suite == Suite::Thm22 {
                let res = field_parallelogram(&fa, &fb, measure, alpha)?;
                cmp.matrix(&res.lhs, same);
                cmp.matrix(&res.rhs, 2.0 * cross - 2.0 * sq(mean));
            } else {
                let gap = field_bohr_gap(&fa, &fb, measure, alpha, TAU)?;
                cmp.matrix(&gap.gap, cross - sq(mean));
            }
        }
        Instance::Families { a, b, r } => {
            let (x, y) = (entries(a), entries(b));
            let res = generalized_parallelogram(a, b, &WeightVector::free(r.clone())?)?;
            cmp.matrix(&res.lhs, pairwise(&x, r) + pairwise(&y, r));
            cmp.matrix(&res.rhs, cross_minus_sum(&x, &y, r));
        }
        Instance::Weighted { a, r } => {
            let x = entries(a);
            let weights = WeightVector::normalized(r.clone())?;
            let pairs = pairwise(&x, r);
            let weighted: f64 = x.iter().zip(r).map(|(z, ri)| ri * sq(*z)).sum();
            match suite {
                Suite::CorZf => {
                    let res = sum_of_squares_identity(a, &weights)?;
                    cmp.matrix(&res.lhs, pairs);
                    cmp.matrix(&res.rhs, weighted - sq(total(&x)));
                }
                Suite::Bohr => {
                    let gap = bohr_gap(a, &weights, TAU)?;
                    cmp.matrix(&gap.gap, weighted - sq(total(&x)));
                }
                _ => {
                    for g in suite.scalar_fns() {
                        let specs = NormSpec::test_family(1);
                        let ms = theorem_main_margins(a, &weights, &g, &specs)?;
                        let lhs: f64 = x.iter().zip(r).map(|(z, ri)| g.eval(sq(*z * ri)) / ri).sum();
                        let mut rhs = g.eval(sq(total(&x)));
                        for i in 0..x.len() {
                            for j in (i + 1)..x.len() {
                                rhs += g.eval(sq(x[i] * c(r, i, j) - x[j] * c(r, j, i)));
                            }
                        }
                        for m in &ms {
                            cmp.margin(m, lhs.abs(), rhs.abs());
                        }
                    }
                }
            }
        }
        Instance::TwoTerm { a1, a2, t } => {
            let (x, y) = (entry(a1), entry(a2));
            let res = two_term_identity(a1, a2, *t)?;
            cmp.matrix(&res.lhs, sq(x + y) + sq(x * t - y) / t);
            cmp.matrix(&res.rhs, (1.0 + t) * sq(x) + (1.0 + 1.0 / t) * sq(y));
        }
        Instance::HilbertSchmidt { a, b } => {
            let (x, y) = (entries(a), entries(b));
            let res = hilbert_schmidt_identity(a, b)?;
            let n = x.len();
            let (mut lhs, mut rhs) = (0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    lhs += sq(x[i] - x[j]) + sq(y[i] - y[j]);
                    rhs += 2.0 * sq(x[i] - y[j]);
                }
            }
            cmp.real(res.lhs, lhs);
            cmp.real(res.rhs, rhs);
        }
        Instance::Vectors { x, y, r } => {
            let xs: Vec<Complex64> = x.iter().map(|v| v.entries()[0]).collect();
            let ys: Vec<Complex64> = y.iter().map(|v| v.entries()[0]).collect();
            match r {
                Some(r) => {
                    let res = vector_weighted_identity(x, y, &WeightVector::free(r.clone())?)?;
                    let (lhs, rhs) = (pairwise(&xs, r) + pairwise(&ys, r), cross_minus_sum(&xs, &ys, r));
                    cmp.real(res.direct.lhs, lhs);
                    cmp.real(res.direct.rhs, rhs);
                    cmp.real(res.rank_one_route.lhs, lhs);
                    cmp.real(res.rank_one_route.rhs, rhs);
                }
                None => {
                    let res = vector_identity(x, y)?;
                    let n = xs.len();
                    let (mut lhs, mut cross) = (0.0, 0.0);
                    for i in 0..n {
                        for j in 0..n {
                            lhs += sq(xs[i] - xs[j]) + sq(ys[i] - ys[j]);
                            cross += sq(xs[i] - ys[j]);
                        }
                    }
                    let diff = total(&xs) - total(&ys);
                    cmp.real(res.lhs, lhs);
                    cmp.real(res.rhs, 2.0 * cross - 2.0 * sq(diff));
                }
            }
        }
        Instance::PsdFamily { a, alphas } => {
            // 1×1 PSD matrices are nonnegative reals
            let x: Vec<f64> = a.iter().map(|m| entry(m).re).collect();
            let specs = NormSpec::test_family(1);
            for g in suite.scalar_fns() {
                match alphas {
                    Some(w) => {
                        let ms = convex_combination_margins(a, w, &g, &specs)?;
                        let lhs: f64 = x.iter().zip(w).map(|(v, wi)| wi * g.eval(*v)).sum();
                        let rhs = g.eval(x.iter().zip(w).map(|(v, wi)| wi * v).sum());
                        for m in &ms {
                            cmp.margin(m, lhs.abs(), rhs.abs());
                        }
                    }
                    None => {
                        let ms = superadditivity_margins(a, &g, &specs)?;
                        let lhs = g.eval(x.iter().sum());
                        let rhs: f64 = x.iter().map(|v| g.eval(*v)).sum();
                        for m in &ms {
                            cmp.margin(m, lhs.abs(), rhs.abs());
                        }
                    }
                }
            }
        }
        Instance::SchattenWeighted { a, r, p } => {
            let x = entries(a);
            let weights = WeightVector::normalized(r.clone())?;
            for &p in p {
                let m = schatten_weighted_ineq(a, &weights, p)?;
                let lhs: f64 = x.iter().zip(r).map(|(z, ri)| ri.powf(p - 1.0) * z.norm().powf(p)).sum();
                let mut rhs = total(&x).norm().powf(p);
                for i in 0..x.len() {
                    for j in (i + 1)..x.len() {
                        rhs += (x[i] * c(r, i, j) - x[j] * c(r, j, i)).norm().powf(p);
                    }
                }
                cmp.margin(&m, lhs, rhs);
            }
        }
    }
    Ok(cmp)
}

/// Absolute agreement to `SCALAR_ORACLE_TOL` for values of size at most 1;
/// beyond that the bound scales with the value, since `1e-14` is below one
/// ulp once `|x| > 64`.
fn scalar_oracle() -> Outcome {
    const TRIALS: u64 = 500;
    const COUNTS: [usize; 4] = [1, 2, 3, 6];
    let mut worst = (0.0f64, 0.0f64, 0.0f64, "");
    let (mut compared, mut over_absolute) = (0usize, 0usize);
    for suite in Suite::ALL {
        for trial in 0..TRIALS {
            let count = COUNTS[(trial % COUNTS.len() as u64) as usize];
            let ctx = TrialRng { seed: 2024, suite: suite.id(), dim: 1, count, trial };
            let inst = generate(suite, &ctx, &P_GRID).map_err(|e| format!("{suite}: {e}"))?;
            let cmp = oracle_compare(suite, &inst).map_err(|e| format!("{suite} trial {trial}: {e}"))?;
            compared += cmp.pairs.len();
            let (scaled, dev, mag, over) = cmp.worst(SCALAR_ORACLE_TOL);
            over_absolute += over;
            if scaled > worst.0 {
                worst = (scaled, dev, mag, suite.id());
            }
        }
    }
    let line = format!(
        "{compared} values over {} suites; max |lib − oracle|/max(1,|oracle|) {:.2e} ({}: {:.2e} at magnitude {:.2e}); \
         {over_absolute} values, all of size > 1, exceed 1e-14 absolute",
        Suite::ALL.len(),
        worst.0,
        worst.3,
        worst.1,
        worst.2
    );
    if worst.0 <= SCALAR_ORACLE_TOL {
        Ok(line)
    } else {
        Err(line)
    }
}

// ---------------------------------------------------------------------------

fn eigensolver_gate() -> Outcome {
    let mut worst_recon = 0.0f64;
    for trial in 0..500u64 {
        let dim = 1 + (trial % 16) as usize;
        let mut s = Stream::for_role(11, "eigen-gate", dim, 0, trial, "H");
        let h = gen_matrix(MatrixKind::Hermitian, dim, &mut s).map_err(|e| e.to_string())?;
        let eig = hermitian_eig(&h).map_err(|e| e.to_string())?;
        let rel = (&eig.reconstruct() - &h).frobenius_norm() / h.frobenius_norm().max(1.0);
        worst_recon = worst_recon.max(rel);
    }
    let mut worst_quad = 0.0f64;
    for trial in 0..500u64 {
        let mut s = Stream::for_role(11, "eigen-gate", 2, 0, trial, "2x2");
        let (a, d) = s.normal_pair();
        let b = s.complex_normal();
        let h = CMatrix::from_rows(&[
            vec![Complex64::new(a, 0.0), b],
            vec![b.conj(), Complex64::new(d, 0.0)],
        ])
        .map_err(|e| e.to_string())?;
        let eig = hermitian_eig(&h).map_err(|e| e.to_string())?;
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        worst_quad = worst_quad
            .max((eig.eigenvalues[0] - (mid + rad)).abs())
            .max((eig.eigenvalues[1] - (mid - rad)).abs());
    }
    let line = format!("max reconstruction {worst_recon:.2e} (dims 1..=16), max 2×2 deviation {worst_quad:.2e}");
    if worst_recon <= RECONSTRUCTION_TOL && worst_quad <= QUADRATIC_TOL {
        Ok(line)
    } else {
        Err(line)
    }
}

fn unitary_invariance() -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for trial in 0..200u64 {
        let dim = 1 + (trial % 8) as usize;
        let draw = |role: &str, kind| {
            gen_matrix(kind, dim, &mut Stream::for_role(13, "unitary-invariance", dim, 0, trial, role))
        };
        let a = draw("A", MatrixKind::Ginibre).map_err(|e| e.to_string())?;
        let u = draw("U", MatrixKind::Unitary).map_err(|e| e.to_string())?;
        let v = draw("V", MatrixKind::Unitary).map_err(|e| e.to_string())?;
        let uav = &(&u * &a) * &v;
        for spec in NormSpec::test_family(dim) {
            let (n0, n1) = (norm(&a, spec).map_err(|e| e.to_string())?, norm(&uav, spec).map_err(|e| e.to_string())?);
            worst = worst.max((n0 - n1).abs() / n0.max(f64::MIN_POSITIVE));
            checked += 1;
        }
    }
    let line = format!("{checked} norm evaluations on 200 triples; max relative change {worst:.2e}");
    if worst <= INVARIANCE_TOL {
        Ok(line)
    } else {
        Err(line)
    }
}

fn reduction_chain() -> Outcome {
    let mut worst = (0.0f64, "");
    for trial in 0..100u64 {
        let dim = 1 + (trial % 6) as usize;
        let count = 2 + (trial % 5) as usize;
        let links = chain::reduction_chain(17, trial, dim, count).map_err(|e| e.to_string())?;
        for l in links {
            if l.residual > worst.0 {
                worst = (l.residual, l.name);
            }
        }
    }
    let line = format!("100 instances; max link residual {:.2e} ({})", worst.0, worst.1);
    if worst.0 <= TAU {
        Ok(line)
    } else {
        Err(line)
    }
}

/// Report JSON with the clock fields removed.
fn stripped_report(bin: &str) -> Result<String, String> {
    let out = Command::new(bin)
        .args(["verify", "--suite", "all", "--seed", "7", "--format", "json"])
        .output()
        .map_err(|e| format!("cannot run {bin}: {e}"))?;
    if !out.status.success() {
        return Err(format!("verify exited with {}", out.status));
    }
    let mut value: serde_json::Value =
        serde_json::from_slice(&out.stdout).map_err(|e| format!("report is not JSON: {e}"))?;
    let obj = value.as_object_mut().ok_or("report is not a JSON object")?;
    obj.remove("started_at");
    obj.remove("wall_ms");
    Ok(value.to_string())
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_oplaw");
    let first = stripped_report(bin)?;
    let second = stripped_report(bin)?;
    if first == second {
        Ok(format!("two runs byte-identical ({} bytes without clock fields)", first.len()))
    } else {
        Err("reports differ between runs".into())
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("identity suites, default grid, 250 trials/cell, τ = 1e-10", || run_grid(&IDENTITY_SUITES)),
        ("gap suites PSD and consistent with the pairwise sums", || run_grid(&GAP_SUITES)),
        ("inequality suites, Schatten p ∈ {0.5, 1, 1.5, 2, 3, 4}", || run_grid(&INEQUALITY_SUITES)),
        ("1×1 scalar oracle within 1e-14·max(1, |value|), 500 trials/suite", scalar_oracle),
        ("eigensolver reconstruction ≤ 1e-12 and 2×2 closed form ≤ 1e-12", eigensolver_gate),
        ("unitary invariance of the norm family within 1e-11", unitary_invariance),
        ("reduction chain links within τ", reduction_chain),
        ("verify --seed 7 JSON report reproducible", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let clock = Instant::now();
        let outcome = check();
        let secs = clock.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} [{secs:.1}s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} [{secs:.1}s] {detail}", i + 1);
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
