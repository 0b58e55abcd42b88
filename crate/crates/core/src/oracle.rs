//! Independent brute-force verification of the decomposition machinery:
//! the intertwiner linear system solved directly, idempotent search over
//! prime fields, and exhaustive small-instance enumeration.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::decompose::{decompose, DecomposeError};
use crate::graded::GradedMap;
use crate::matrix::Mat;
use crate::rep::{Intertwiner, RepError, Representation};
use crate::scalar::{Scalar, ScalarField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error("brute force requires a prime field, got {0}")]
    NeedsPrimeField(ScalarField),
    #[error("endomorphism space dimension {dim} exceeds the bound {bound}")]
    BoundExceeded { dim: usize, bound: usize },
    #[error("invalid configuration: {0}")]
    BadConfig(String),
}

/// Basis of the space of degree-0 intertwiners `(phi, psi)` from `a` to
/// `b`: solutions of `alpha_b phi = psi alpha_a`, `beta_b phi = psi beta_a`.
pub fn hom_space(a: &Representation, b: &Representation) -> Result<Vec<Intertwiner>, OracleError> {
    if a.d != b.d {
        return Err(OracleError::Rep(RepError::DMismatch(a.d, b.d)));
    }
    if a.field() != b.field() {
        return Err(OracleError::Rep(RepError::FieldMismatch));
    }
    let field = a.field();

    // Unknown layout: phi blocks (degree, row, col) first, then psi blocks.
    let mut phi_slots: Vec<(i64, usize, usize)> = Vec::new();
    for i in a.v.support() {
        if b.v.dim(i) > 0 {
            phi_slots.push((i, b.v.dim(i), a.v.dim(i)));
        }
    }
    let mut psi_slots: Vec<(i64, usize, usize)> = Vec::new();
    for i in a.w.support() {
        if b.w.dim(i) > 0 {
            psi_slots.push((i, b.w.dim(i), a.w.dim(i)));
        }
    }
    let phi_len: usize = phi_slots.iter().map(|&(_, r, c)| r * c).sum();
    let total = phi_len + psi_slots.iter().map(|&(_, r, c)| r * c).sum::<usize>();

    let phi_index = |slots: &[(i64, usize, usize)], deg: i64, r: usize, c: usize| -> Option<usize> {
        let mut off = 0usize;
        for &(i, rows, cols) in slots {
            if i == deg {
                return Some(off + r * cols + c);
            }
            off += rows * cols;
        }
        None
    };

    // Equations: for each map m in {alpha, beta} and each source degree i,
    //   m_b(i..) * phi(i) - psi(i + deg m) * m_a(i) = 0.
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (ma, mb) in [(&a.alpha, &b.alpha), (&a.beta, &b.beta)] {
        let s = ma.degree();
        for i in a.v.support() {
            let t = i + s;
            let out_rows = b.w.dim(t);
            let out_cols = a.v.dim(i);
            if out_rows == 0 || out_cols == 0 {
                continue;
            }
            let mb_block = mb.block_or_zero(i);
            let ma_block = ma.block_or_zero(i);
            for r in 0..out_rows {
                for c in 0..out_cols {
                    let mut eq = vec![field.zero(); total];
                    // (m_b(i) * phi(i))[r, c] = sum_k m_b[r, k] phi[k, c]
                    for k in 0..b.v.dim(i) {
                        if let Some(ix) = phi_index(&phi_slots, i, k, c) {
                            eq[ix] = &eq[ix] + mb_block.get(r, k);
                        }
                    }
                    // -(psi(t) * m_a(i))[r, c] = -sum_k psi[r, k] m_a[k, c]
                    for k in 0..a.w.dim(t) {
                        if let Some(ix) = phi_index(&psi_slots, t, r, k) {
                            let ix = phi_len + ix;
                            eq[ix] = &eq[ix] - ma_block.get(k, c);
                        }
                    }
                    if eq.iter().any(|x| !x.is_zero()) {
                        rows.push(eq);
                    }
                }
            }
        }
    }

    let kernel = if rows.is_empty() {
        Mat::identity(field, total)
    } else {
        Mat::from_rows(field, rows).kernel_basis()
    };

    let mut basis = Vec::new();
    for j in 0..kernel.cols() {
        let mut phi_blocks: BTreeMap<i64, Mat> = BTreeMap::new();
        let mut psi_blocks: BTreeMap<i64, Mat> = BTreeMap::new();
        let mut off = 0usize;
        for &(i, r, c) in &phi_slots {
            let mut m = Mat::zero(field, r, c);
            for rr in 0..r {
                for cc in 0..c {
                    m.set(rr, cc, kernel.get(off + rr * c + cc, j).clone());
                }
            }
            off += r * c;
            if !m.is_zero() {
                phi_blocks.insert(i, m);
            }
        }
        for &(i, r, c) in &psi_slots {
            let mut m = Mat::zero(field, r, c);
            for rr in 0..r {
                for cc in 0..c {
                    m.set(rr, cc, kernel.get(off + rr * c + cc, j).clone());
                }
            }
            off += r * c;
            if !m.is_zero() {
                psi_blocks.insert(i, m);
            }
        }
        let phi = GradedMap::new(a.v.clone(), b.v.clone(), 0, phi_blocks)
            .map_err(RepError::from)?;
        let psi = GradedMap::new(a.w.clone(), b.w.clone(), 0, psi_blocks)
            .map_err(RepError::from)?;
        basis.push(Intertwiner { phi, psi });
    }
    Ok(basis)
}

/// The degree-0 endomorphism space of a representation.
#[derive(Clone, Debug)]
pub struct EndomorphismSpace {
    pub basis: Vec<Intertwiner>,
}

impl EndomorphismSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Membership test by rank comparison against the basis.
    pub fn contains(&self, e: &Intertwiner, rep: &Representation) -> bool {
        let field = rep.field();
        let mut rows: Vec<Vec<Scalar>> = self
            .basis
            .iter()
            .map(|b| endo_coords(b, rep, field))
            .collect();
        let base_rank = if rows.is_empty() {
            0
        } else {
            Mat::from_rows(field, rows.clone()).rank()
        };
        rows.push(endo_coords(e, rep, field));
        Mat::from_rows(field, rows).rank() == base_rank
    }
}

fn endo_coords(e: &Intertwiner, rep: &Representation, field: ScalarField) -> Vec<Scalar> {
    let mut out = Vec::new();
    for i in rep.v.support() {
        let n = rep.v.dim(i);
        let block = e.phi.block_or_zero(i);
        for r in 0..n {
            for c in 0..n {
                out.push(block.get(r, c).clone());
            }
        }
    }
    for i in rep.w.support() {
        let n = rep.w.dim(i);
        let block = e.psi.block_or_zero(i);
        for r in 0..n {
            for c in 0..n {
                out.push(block.get(r, c).clone());
            }
        }
    }
    if out.is_empty() {
        out.push(field.zero());
    }
    out
}

/// Solve the intertwiner system of a representation against itself.
pub fn end_space(rep: &Representation) -> Result<EndomorphismSpace, OracleError> {
    rep.validate()?;
    Ok(EndomorphismSpace { basis: hom_space(rep, rep)? })
}

fn is_identity(e: &Intertwiner, rep: &Representation) -> bool {
    e.phi == GradedMap::identity(&rep.v) && e.psi == GradedMap::identity(&rep.w)
}

fn is_zero_endo(e: &Intertwiner) -> bool {
    e.phi.is_zero() && e.psi.is_zero()
}

/// Idempotent search over a prime field: enumerate the whole endomorphism
/// space and return true iff the representation is nonzero and carries no
/// idempotents besides 0 and the identity. The zero representation counts
/// as decomposable (it is the empty sum).
pub fn is_indecomposable_bruteforce(
    rep: &Representation,
    bound: usize,
) -> Result<bool, OracleError> {
    let ScalarField::Prime(p) = rep.field() else {
        return Err(OracleError::NeedsPrimeField(rep.field()));
    };
    if rep.is_zero() {
        return Ok(false);
    }
    let space = end_space(rep)?;
    let dim = space.dimension();
    if dim > bound {
        return Err(OracleError::BoundExceeded { dim, bound });
    }
    let field = rep.field();
    let mut coeffs = vec![0u32; dim];
    loop {
        // e = sum coeffs[i] * basis[i]
        let mut e = Intertwiner {
            phi: GradedMap::zero(rep.v.clone(), rep.v.clone(), 0),
            psi: GradedMap::zero(rep.w.clone(), rep.w.clone(), 0),
        };
        for (ix, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let s = field.from_i64(c as i64);
            e = Intertwiner {
                phi: e.phi.sub(&scale_map(&space.basis[ix].phi, &(-&s))),
                psi: e.psi.sub(&scale_map(&space.basis[ix].psi, &(-&s))),
            };
        }
        let ee = e.compose(&e).map_err(OracleError::Rep)?;
        if ee == e && !is_zero_endo(&e) && !is_identity(&e, rep) {
            return Ok(false);
        }
        // next coefficient vector
        let mut k = 0;
        loop {
            if k == dim {
                return Ok(true);
            }
            coeffs[k] += 1;
            if coeffs[k] < p {
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
    }
}

fn scale_map(m: &GradedMap, c: &Scalar) -> GradedMap {
    let blocks = m.blocks().iter().map(|(&i, b)| (i, b.scale(c))).collect();
    GradedMap::new_unchecked(m.source().clone(), m.target().clone(), m.degree(), blocks)
}

/// Configuration for [`exhaustive_agreement`]: enumerate every
/// representation over `F_p` whose `V` and `W` supports lie in the window
/// `0..window` with `dim V + dim W <= max_total_dim`.
#[derive(Clone, Debug)]
pub struct ExhaustiveConfig {
    pub max_total_dim: usize,
    pub window: usize,
    pub prime: u32,
    pub d_values: Vec<i64>,
    pub end_dim_bound: usize,
}

impl ExhaustiveConfig {
    pub fn new(max_total_dim: usize, window: usize, prime: u32, d_values: Vec<i64>) -> Self {
        ExhaustiveConfig { max_total_dim, window, prime, d_values, end_dim_bound: 8 }
    }

    fn validate(&self) -> Result<ScalarField, OracleError> {
        if self.max_total_dim > 4 {
            return Err(OracleError::BadConfig("max_total_dim must be <= 4".to_string()));
        }
        if self.window == 0 || self.window > 4 {
            return Err(OracleError::BadConfig("window must be in 1..=4".to_string()));
        }
        if self.d_values.iter().any(|&d| d == 0) {
            return Err(OracleError::BadConfig("d values must be nonzero".to_string()));
        }
        ScalarField::prime(self.prime).map_err(|e| OracleError::BadConfig(e.to_string()))
    }
}

/// One failing instance, if any are ever found.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub d: i64,
    pub v_dims: Vec<usize>,
    pub w_dims: Vec<usize>,
    pub entry_code: u64,
    pub summand_count: usize,
    pub brute_indecomposable: bool,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d={} V={:?} W={:?} code={}: {} (summands={}, brute={})",
            self.d,
            self.v_dims,
            self.w_dims,
            self.entry_code,
            self.detail,
            self.summand_count,
            self.brute_indecomposable
        )
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ExhaustiveReport {
    pub profiles: usize,
    pub instances: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl ExhaustiveReport {
    pub fn consistent(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Clone)]
struct Task {
    d: i64,
    v_dims: Vec<usize>,
    w_dims: Vec<usize>,
}

fn enumerate_tasks(cfg: &ExhaustiveConfig) -> Vec<Task> {
    // All (V, W) dimension assignments over the window with bounded total.
    let w = cfg.window;
    let mut tasks = Vec::new();
    let mut dims = vec![0usize; 2 * w];
    loop {
        let total: usize = dims.iter().sum();
        if total <= cfg.max_total_dim {
            for &d in &cfg.d_values {
                tasks.push(Task {
                    d,
                    v_dims: dims[..w].to_vec(),
                    w_dims: dims[w..].to_vec(),
                });
            }
        }
        let mut k = 0;
        loop {
            if k == dims.len() {
                return tasks;
            }
            dims[k] += 1;
            if dims[k] <= cfg.max_total_dim {
                break;
            }
            dims[k] = 0;
            k += 1;
        }
    }
}

fn run_task(cfg: &ExhaustiveConfig, field: ScalarField, task: &Task) -> (usize, Vec<Counterexample>) {
    use crate::graded::GradedVectorSpace;

    let w = cfg.window;
    let v_space = GradedVectorSpace::from_dims(
        field,
        task.v_dims.iter().enumerate().map(|(g, &n)| (g as i64, n)),
    );
    let w_space = GradedVectorSpace::from_dims(
        field,
        task.w_dims.iter().enumerate().map(|(g, &n)| (g as i64, n)),
    );
    // Cells: (is_beta, source degree, row, col) for blocks landing inside
    // the window.
    let mut cells: Vec<(bool, i64, usize, usize)> = Vec::new();
    for g in 0..w as i64 {
        let vd = v_space.dim(g);
        if vd == 0 {
            continue;
        }
        for r in 0..w_space.dim(g) {
            for c in 0..vd {
                cells.push((false, g, r, c));
            }
        }
        for r in 0..w_space.dim(g + task.d) {
            for c in 0..vd {
                cells.push((true, g, r, c));
            }
        }
    }
    let p = cfg.prime as u64;
    let count = (p as u128).pow(cells.len() as u32);
    debug_assert!(count <= 1 << 20, "cell count bounded by config validation");

    let mut instances = 0usize;
    let mut bad = Vec::new();
    for code in 0..count as u64 {
        let mut alpha_blocks: BTreeMap<i64, Mat> = BTreeMap::new();
        let mut beta_blocks: BTreeMap<i64, Mat> = BTreeMap::new();
        let mut rem = code;
        for &(is_beta, g, r, c) in &cells {
            let val = (rem % p) as i64;
            rem /= p;
            if val == 0 {
                continue;
            }
            let blocks = if is_beta { &mut beta_blocks } else { &mut alpha_blocks };
            let target_deg = if is_beta { g + task.d } else { g };
            let m = blocks.entry(g).or_insert_with(|| {
                Mat::zero(field, w_space.dim(target_deg), v_space.dim(g))
            });
            m.set(r, c, field.from_i64(val));
        }
        let alpha = match GradedMap::new(v_space.clone(), w_space.clone(), 0, alpha_blocks) {
            Ok(m) => m,
            Err(e) => {
                bad.push(mk_counterexample(task, code, 0, false, format!("alpha build: {e}")));
                continue;
            }
        };
        let beta = match GradedMap::new(v_space.clone(), w_space.clone(), task.d, beta_blocks) {
            Ok(m) => m,
            Err(e) => {
                bad.push(mk_counterexample(task, code, 0, false, format!("beta build: {e}")));
                continue;
            }
        };
        let rep = match Representation::new(task.d, v_space.clone(), w_space.clone(), alpha, beta)
        {
            Ok(r) => r,
            Err(e) => {
                bad.push(mk_counterexample(task, code, 0, false, format!("validate: {e}")));
                continue;
            }
        };
        instances += 1;

        let dec = match decompose(&rep) {
            Ok(d) => d,
            Err(e) => {
                bad.push(mk_counterexample(task, code, 0, false, format!("decompose: {e}")));
                continue;
            }
        };
        if let Err(e) = dec.verify(&rep) {
            bad.push(mk_counterexample(
                task,
                code,
                dec.summands.len(),
                false,
                format!("witness: {e}"),
            ));
            continue;
        }
        let brute = if rep.is_zero() {
            false
        } else {
            match is_indecomposable_bruteforce(&rep, cfg.end_dim_bound) {
                Ok(b) => b,
                Err(e) => {
                    bad.push(mk_counterexample(
                        task,
                        code,
                        dec.summands.len(),
                        false,
                        format!("brute force: {e}"),
                    ));
                    continue;
                }
            }
        };
        if (dec.summands.len() == 1) != brute {
            bad.push(mk_counterexample(
                task,
                code,
                dec.summands.len(),
                brute,
                "summand count disagrees with idempotent search".to_string(),
            ));
        }
    }
    (instances, bad)
}

fn mk_counterexample(
    task: &Task,
    code: u64,
    summands: usize,
    brute: bool,
    detail: String,
) -> Counterexample {
    Counterexample {
        d: task.d,
        v_dims: task.v_dims.clone(),
        w_dims: task.w_dims.clone(),
        entry_code: code,
        summand_count: summands,
        brute_indecomposable: brute,
        detail,
    }
}

fn merge_report(tasks: usize, results: Vec<(usize, Vec<Counterexample>)>) -> ExhaustiveReport {
    let mut report = ExhaustiveReport { profiles: tasks, ..Default::default() };
    for (n, mut bad) in results {
        report.instances += n;
        report.counterexamples.append(&mut bad);
    }
    report
}

/// Enumerate every representation within the configured bounds; for each,
/// check that `decompose` yields exactly one summand precisely when the
/// idempotent brute force declares it indecomposable, and that the
/// base-change witness verifies entrywise. Parallel when the `parallel`
/// feature is on; the merged report is schedule-independent.
pub fn exhaustive_agreement(cfg: &ExhaustiveConfig) -> Result<ExhaustiveReport, OracleError> {
    let field = cfg.validate()?;
    let tasks = enumerate_tasks(cfg);
    let results = crate::par::map_slice(&tasks, |t| run_task(cfg, field, t));
    Ok(merge_report(tasks.len(), results))
}

/// Always-sequential twin of [`exhaustive_agreement`]; kept for benchmarks
/// and for checking schedule-independence of the report.
pub fn exhaustive_agreement_serial(
    cfg: &ExhaustiveConfig,
) -> Result<ExhaustiveReport, OracleError> {
    let field = cfg.validate()?;
    let tasks = enumerate_tasks(cfg);
    let results = crate::par::map_slice_seq(&tasks, |t| run_task(cfg, field, t));
    Ok(merge_report(tasks.len(), results))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::hom_between;
    use crate::rep::{normal_form, random_base_change, Family, IndecomposableLabel};

    const Q: ScalarField = ScalarField::Rational;

    fn label(family: Family, shift: i64) -> IndecomposableLabel {
        IndecomposableLabel::new(family, shift)
    }

    fn f2() -> ScalarField {
        ScalarField::prime(2).unwrap()
    }

    #[test]
    fn end_space_of_simple_torsion_is_scalars() {
        let rep = normal_form(label(Family::TorsionInfinity(1), 0), -1, Q).unwrap();
        let space = end_space(&rep).unwrap();
        assert_eq!(space.dimension(), 1);
        assert!(space.contains(&Intertwiner::identity(&rep), &rep));
    }

    #[test]
    fn end_space_of_zero_rep_is_zero() {
        let rep = Representation::zero(-1, Q).unwrap();
        assert_eq!(end_space(&rep).unwrap().dimension(), 0);
    }

    #[test]
    fn sums_have_projections() {
        let a = normal_form(label(Family::TorsionInfinity(1), 0), -1, Q).unwrap();
        let b = normal_form(label(Family::LineBundle(0), 0), -1, Q).unwrap();
        let sum = a.direct_sum(&b).unwrap();
        assert!(end_space(&sum).unwrap().dimension() >= 2);
    }

    #[test]
    fn end_space_contains_identity_and_compositions() {
        let rep = normal_form(label(Family::TorsionZero(2), 0), -1, Q).unwrap();
        let space = end_space(&rep).unwrap();
        assert!(space.contains(&Intertwiner::identity(&rep), &rep));
        for x in &space.basis {
            for y in &space.basis {
                let xy = x.compose(y).unwrap();
                assert!(space.contains(&xy, &rep), "not closed under composition");
            }
        }
    }

    #[test]
    fn end_dimension_is_base_change_invariant() {
        let rep = normal_form(label(Family::TorsionZero(2), 0), -2, Q)
            .unwrap()
            .direct_sum(&normal_form(label(Family::LineBundle(1), 0), -2, Q).unwrap())
            .unwrap();
        let dim = end_space(&rep).unwrap().dimension();
        for seed in 0..5u64 {
            let (other, _) = random_base_change(&rep, seed);
            assert_eq!(end_space(&other).unwrap().dimension(), dim);
        }
    }

    #[test]
    fn end_dimension_matches_hom_complex_h0() {
        for (fam, d) in [
            (Family::TorsionInfinity(2), -1i64),
            (Family::TorsionZero(1), -2),
            (Family::LineBundle(2), 1),
        ] {
            let rep = normal_form(label(fam, 0), d, Q).unwrap();
            let sum = rep.direct_sum(&rep).unwrap();
            for r in [&rep, &sum] {
                let end_dim = end_space(r).unwrap().dimension();
                let h00 = hom_between(r, r).unwrap().dim(0, 0);
                assert_eq!(end_dim, h00, "family {fam:?} d={d}");
            }
        }
    }

    #[test]
    fn multiplicity_lower_bound_on_end_dimension() {
        // m copies of one class contribute at least m^2 self-homs.
        let nf = normal_form(label(Family::TorsionInfinity(1), 0), -1, f2()).unwrap();
        let other = normal_form(label(Family::LineBundle(0), 0), -1, f2()).unwrap();
        let rep = nf
            .direct_sum(&nf)
            .unwrap()
            .direct_sum(&other)
            .unwrap();
        let dim = end_space(&rep).unwrap().dimension();
        assert!(dim >= 4 + 1, "dim = {dim}");
    }

    #[test]
    fn brute_force_on_normal_forms() {
        for fam in [
            Family::LineBundle(-2),
            Family::LineBundle(0),
            Family::LineBundle(1),
            Family::TorsionZero(1),
            Family::TorsionZero(2),
            Family::TorsionInfinity(2),
        ] {
            let rep = normal_form(label(fam, 0), -1, f2()).unwrap();
            assert!(is_indecomposable_bruteforce(&rep, 8).unwrap(), "family {fam:?}");
        }
    }

    #[test]
    fn brute_force_rejects_sums_and_zero() {
        let a = normal_form(label(Family::TorsionInfinity(1), 0), -1, f2()).unwrap();
        let sum = a.direct_sum(&a).unwrap();
        assert!(!is_indecomposable_bruteforce(&sum, 8).unwrap());
        let zero = Representation::zero(-1, f2()).unwrap();
        assert!(!is_indecomposable_bruteforce(&zero, 8).unwrap());
    }

    #[test]
    fn brute_force_needs_prime_field() {
        let rep = normal_form(label(Family::TorsionInfinity(1), 0), -1, Q).unwrap();
        assert!(matches!(
            is_indecomposable_bruteforce(&rep, 8),
            Err(OracleError::NeedsPrimeField(_))
        ));
    }

    #[test]
    fn tiny_window_enumeration_by_hand() {
        // dim V = dim W = 1 in a width-2 window at d = -1: four reps in
        // total. alpha live: {0, 1} entries; beta live: {0, 1}.
        let cfg = ExhaustiveConfig::new(2, 2, 2, vec![-1]);
        let report = exhaustive_agreement(&cfg).unwrap();
        assert!(report.consistent(), "{:?}", report.counterexamples);
        // The four 1+1-dimensional instances are among the enumerated ones.
        assert!(report.instances >= 4);
    }

    #[test]
    fn empty_profile_is_trivially_consistent() {
        let cfg = ExhaustiveConfig::new(0, 1, 2, vec![-1]);
        let report = exhaustive_agreement(&cfg).unwrap();
        assert!(report.consistent());
    }

    #[test]
    fn serial_and_parallel_reports_agree() {
        let cfg = ExhaustiveConfig::new(2, 2, 2, vec![-1, 1]);
        let a = exhaustive_agreement(&cfg).unwrap();
        let b = exhaustive_agreement_serial(&cfg).unwrap();
        assert_eq!(a, b);
    }
}
