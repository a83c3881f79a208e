//! Exact diagonalization of small periodic Ising chains.
//!
//! Basis states are bit strings: bit `i` set means spin `i` points down,
//! i.e. `sigma^z_i = -1`. All arithmetic is `f64`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::sector::Parity;
use crate::{Error, Result};

pub const MAX_SPINS: usize = 12;
const DENSE_LIMIT: usize = 1 << 10;
const RESIDUAL_TOL: f64 = 1e-10;
const PARITY_TOL: f64 = 1e-8;
const DEGENERACY_TOL: f64 = 1e-10;

/// How the stored real matrix represents the operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorForm {
    /// The operator is `matrix`.
    RealSymmetric,
    /// The operator is `i * matrix` with `matrix` antisymmetric.
    ImaginaryAntisymmetric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub n_spins: usize,
    pub form: OperatorForm,
    pub matrix: DMatrix<f64>,
}

impl DenseOperator {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest `|M - s M^T|` entry, with `s = +1` for symmetric and `-1`
    /// for antisymmetric storage.
    pub fn symmetry_defect(&self) -> f64 {
        let s = match self.form {
            OperatorForm::RealSymmetric => 1.0,
            OperatorForm::ImaginaryAntisymmetric => -1.0,
        };
        let m = &self.matrix;
        (m - m.transpose() * s).amax()
    }
}

fn check_size(n_spins: usize, min: usize) -> Result<()> {
    if n_spins < min || n_spins > MAX_SPINS {
        return Err(Error::ChainSize(n_spins, min, MAX_SPINS));
    }
    Ok(())
}

#[inline]
fn bit(s: usize, i: usize) -> usize {
    (s >> i) & 1
}

#[inline]
fn parity_of(s: usize) -> Parity {
    if s.count_ones() % 2 == 0 {
        Parity::Positive
    } else {
        Parity::Negative
    }
}

/// `-sum_i (sigma^x_i sigma^x_{i+1} + g sigma^z_i)` with periodic closure.
pub fn build_hamiltonian(n_spins: usize, g: f64) -> Result<DenseOperator> {
    check_size(n_spins, 2)?;
    if !g.is_finite() {
        return Err(Error::Domain(format!("field g must be finite, got {g}")));
    }
    let dim = 1 << n_spins;
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let mut diag = 0.0;
        for i in 0..n_spins {
            diag -= g * (1.0 - 2.0 * bit(s, i) as f64);
            let j = (i + 1) % n_spins;
            let t = s ^ (1 << i) ^ (1 << j);
            h[(t, s)] -= 1.0;
        }
        h[(s, s)] += diag;
    }
    Ok(DenseOperator { n_spins, form: OperatorForm::RealSymmetric, matrix: h })
}

/// `prod_i sigma^z_i`.
pub fn build_parity(n_spins: usize) -> Result<DenseOperator> {
    check_size(n_spins, 1)?;
    let dim = 1 << n_spins;
    let diag = DVector::from_fn(dim, |s, _| f64::from(parity_of(s).sign() as i32));
    Ok(DenseOperator { n_spins, form: OperatorForm::RealSymmetric, matrix: DMatrix::from_diagonal(&diag) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// A product of single-site Pauli matrices on distinct sites.
pub type PauliString = Vec<(usize, Pauli)>;

/// The terms of `H^{[m]} = sum_n sigma^x_n Z sigma^y_{n+m} + sigma^y_n Z sigma^x_{n+m}`
/// where `Z` is the `sigma^z` string on the sites strictly between.
pub fn string_operator_terms(n_spins: usize, m: usize) -> Result<Vec<PauliString>> {
    check_size(n_spins, 2)?;
    if m == 0 || m >= n_spins {
        return Err(Error::OrderOutOfRange { m: m as u64, lo: 1, hi: n_spins as u64 - 1 });
    }
    let mut terms = Vec::with_capacity(2 * n_spins);
    for (a, b) in [(Pauli::X, Pauli::Y), (Pauli::Y, Pauli::X)] {
        for n in 0..n_spins {
            let mut t = vec![(n, a)];
            t.extend((1..m).map(|j| ((n + j) % n_spins, Pauli::Z)));
            t.push(((n + m) % n_spins, b));
            terms.push(t);
        }
    }
    Ok(terms)
}

/// `H^{[m]}` stored as `i * A` with real antisymmetric `A`.
///
/// Each term has exactly one `sigma^y`, and `sigma^y = i Y` where `Y` is the
/// real matrix with `Y|up> = |down>` and `Y|down> = -|up>`.
pub fn build_string_operator(n_spins: usize, m: usize) -> Result<DenseOperator> {
    let terms = string_operator_terms(n_spins, m)?;
    let dim = 1 << n_spins;
    let mut a = DMatrix::zeros(dim, dim);
    for term in &terms {
        for s in 0..dim {
            let mut sign = 1.0;
            let mut t = s;
            for &(site, p) in term {
                let down = bit(s, site) == 1;
                match p {
                    Pauli::X => t ^= 1 << site,
                    Pauli::Y => {
                        if down {
                            sign = -sign;
                        }
                        t ^= 1 << site;
                    }
                    Pauli::Z => {
                        if down {
                            sign = -sign;
                        }
                    }
                }
            }
            a[(t, s)] += sign;
        }
    }
    Ok(DenseOperator { n_spins, form: OperatorForm::ImaginaryAntisymmetric, matrix: a })
}

/// Largest entry of `[A, B]` on the stored matrices; for imaginary storage
/// this equals the largest entry of the true commutator.
pub fn commutator_max(a: &DenseOperator, b: &DenseOperator) -> f64 {
    let (x, y) = (&a.matrix, &b.matrix);
    if let Some(d) = diagonal(y) {
        return diagonal_commutator_max(x, &d);
    }
    if let Some(d) = diagonal(x) {
        return diagonal_commutator_max(y, &d);
    }
    (x * y - y * x).amax()
}

fn diagonal(m: &DMatrix<f64>) -> Option<DVector<f64>> {
    let off = m.iter().enumerate().any(|(k, v)| k % m.nrows() != k / m.nrows() && *v != 0.0);
    (!off).then(|| m.diagonal())
}

// [M, D]_ij = M_ij (d_j - d_i)
fn diagonal_commutator_max(m: &DMatrix<f64>, d: &DVector<f64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max((m[(i, j)] * (d[j] - d[i])).abs());
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    /// Unit vector on the full `2^N` basis, first nonzero component positive.
    pub vector: DVector<f64>,
    pub parity: Parity,
    pub parity_expectation: f64,
}

struct Eigenpair {
    value: f64,
    vector: DVector<f64>,
    /// Second-lowest eigenvalue when the solver produced it.
    next: Option<f64>,
}

fn dense_lowest(m: &DMatrix<f64>) -> Eigenpair {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let i0 = order[0];
    Eigenpair {
        value: eig.eigenvalues[i0],
        vector: eig.eigenvectors.column(i0).into_owned(),
        next: order.get(1).map(|&i| eig.eigenvalues[i]),
    }
}

/// Lanczos with full reorthogonalization, started from a fixed vector.
fn lanczos_lowest(m: &DMatrix<f64>) -> Result<Eigenpair> {
    let dim = m.nrows();
    let max_iter = dim.min(400);
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(max_iter);
    let mut v = DVector::from_fn(dim, |i, _| 1.0 + 0.5 * ((i as f64 * 0.618_033_988_75).fract() - 0.5));
    v /= v.norm();
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut best: Option<Eigenpair> = None;
    for k in 0..max_iter {
        basis.push(v.clone());
        let mut w = m * &v;
        let a = w.dot(&v);
        alphas.push(a);
        for b in &basis {
            let c = w.dot(b);
            w.axpy(-c, b, 1.0);
        }
        for b in &basis {
            let c = w.dot(b);
            w.axpy(-c, b, 1.0);
        }
        let beta = w.norm();
        let done = beta < 1e-14 || k + 1 == max_iter;
        if k % 10 == 9 || done {
            let t = tridiagonal(&alphas, &betas);
            let small = dense_lowest(&t);
            let mut ritz = DVector::zeros(dim);
            for (c, b) in small.vector.iter().zip(&basis) {
                ritz.axpy(*c, b, 1.0);
            }
            ritz /= ritz.norm();
            let residual = (m * &ritz - &ritz * small.value).norm();
            let pair = Eigenpair { value: small.value, vector: ritz, next: small.next };
            if residual <= 0.1 * RESIDUAL_TOL {
                return Ok(pair);
            }
            best = Some(pair);
        }
        if done {
            break;
        }
        betas.push(beta);
        v = w / beta;
    }
    let pair = best.expect("at least one Ritz pair");
    let residual = (m * &pair.vector - &pair.vector * pair.value).norm();
    if residual <= RESIDUAL_TOL {
        Ok(pair)
    } else {
        Err(Error::NoConvergence(residual))
    }
}

fn tridiagonal(alphas: &[f64], betas: &[f64]) -> DMatrix<f64> {
    let k = alphas.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    t
}

fn lowest(m: &DMatrix<f64>) -> Result<Eigenpair> {
    let pair = if m.nrows() <= DENSE_LIMIT { dense_lowest(m) } else { lanczos_lowest(m)? };
    let residual = (m * &pair.vector - &pair.vector * pair.value).norm();
    if residual > RESIDUAL_TOL {
        return Err(Error::NoConvergence(residual));
    }
    Ok(pair)
}

fn fix_sign(v: &mut DVector<f64>) {
    if let Some(first) = v.iter().find(|c| c.abs() > 1e-14) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
}

fn parity_expectation(v: &DVector<f64>) -> f64 {
    v.iter().enumerate().map(|(s, c)| c * c * parity_of(s).sign() as f64).sum()
}

fn sector_indices(n_spins: usize, parity: Parity) -> Vec<usize> {
    (0..1usize << n_spins).filter(|&s| parity_of(s) == parity).collect()
}

fn require_symmetric(op: &DenseOperator) -> Result<()> {
    if op.form != OperatorForm::RealSymmetric || op.symmetry_defect() > 1e-12 {
        return Err(Error::NotSymmetric);
    }
    Ok(())
}

fn couples_sectors(op: &DenseOperator) -> bool {
    let m = &op.matrix;
    (0..m.ncols()).any(|j| (0..m.nrows()).any(|i| parity_of(i) != parity_of(j) && m[(i, j)].abs() > 1e-13))
}

struct SectorSolution {
    energy: f64,
    gap: Option<f64>,
    vector: DVector<f64>,
}

fn solve_sector(op: &DenseOperator, parity: Parity) -> Result<SectorSolution> {
    let idx = sector_indices(op.n_spins, parity);
    let sub = op.matrix.select_rows(&idx).select_columns(&idx);
    let pair = lowest(&sub)?;
    let mut full = DVector::zeros(op.dimension());
    for (c, &s) in pair.vector.iter().zip(&idx) {
        full[s] = *c;
    }
    fix_sign(&mut full);
    Ok(SectorSolution { energy: pair.value, gap: pair.next.map(|e| e - pair.value), vector: full })
}

/// Lowest state of `op` restricted to one parity sector.
pub fn sector_ground_state(op: &DenseOperator, parity: Parity) -> Result<GroundState> {
    require_symmetric(op)?;
    if couples_sectors(op) {
        return Err(Error::IndefiniteParity(f64::NAN));
    }
    let sol = solve_sector(op, parity)?;
    Ok(GroundState { energy: sol.energy, vector: sol.vector, parity, parity_expectation: parity.sign() as f64 })
}

/// Lowest eigenpair with its measured parity.
///
/// When the solver returns a parity mixture (a degenerate pair across the
/// sectors), both sectors are solved separately and the lower one is kept,
/// preferring positive parity on an exact tie.
pub fn ground_state(op: &DenseOperator) -> Result<GroundState> {
    require_symmetric(op)?;
    let mut pair = lowest(&op.matrix)?;
    fix_sign(&mut pair.vector);
    let p = parity_expectation(&pair.vector);
    if p.abs() >= 1.0 - PARITY_TOL {
        return Ok(GroundState {
            energy: pair.value,
            vector: pair.vector,
            parity: Parity::from_sign(p.signum() as i64),
            parity_expectation: p,
        });
    }
    if couples_sectors(op) {
        return Err(Error::IndefiniteParity(p));
    }
    let plus = sector_ground_state(op, Parity::Positive)?;
    let minus = sector_ground_state(op, Parity::Negative)?;
    Ok(if minus.energy < plus.energy - DEGENERACY_TOL { minus } else { plus })
}

/// Overlap of ground states at `g` and `g + delta`, taken inside the parity
/// sector that holds the ground state at `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fidelity {
    pub overlap: f64,
    pub parity: Parity,
    /// Set when the two sector energies at `g`, or the two lowest levels of
    /// the chosen sector, lie within `1e-10`.
    pub degenerate: bool,
}

struct GroundSector {
    parity: Parity,
    degenerate: bool,
    state: SectorSolution,
}

fn ground_sector(n_spins: usize, g: f64) -> Result<GroundSector> {
    let h = build_hamiltonian(n_spins, g)?;
    let plus = solve_sector(&h, Parity::Positive)?;
    let minus = solve_sector(&h, Parity::Negative)?;
    let tie = (plus.energy - minus.energy).abs() <= DEGENERACY_TOL;
    let (parity, state) = if !tie && minus.energy < plus.energy {
        (Parity::Negative, minus)
    } else {
        (Parity::Positive, plus)
    };
    let inner = state.gap.is_some_and(|d| d <= DEGENERACY_TOL);
    Ok(GroundSector { parity, degenerate: tie || inner, state })
}

fn shifted_overlap(n_spins: usize, g: f64, delta: f64, at: &GroundSector) -> Result<f64> {
    if delta == 0.0 {
        return Ok(1.0);
    }
    let h = build_hamiltonian(n_spins, g + delta)?;
    let shifted = solve_sector(&h, at.parity)?;
    Ok(at.state.vector.dot(&shifted.vector).abs().min(1.0))
}

pub fn fidelity_overlap(n_spins: usize, g: f64, delta: f64) -> Result<Fidelity> {
    if !delta.is_finite() {
        return Err(Error::Domain(format!("delta must be finite, got {delta}")));
    }
    let at = ground_sector(n_spins, g)?;
    let overlap = shifted_overlap(n_spins, g, delta, &at)?;
    Ok(Fidelity { overlap, parity: at.parity, degenerate: at.degenerate })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDifferenceChi {
    pub chi: f64,
    pub parity: Parity,
    pub degenerate: bool,
}

/// `(2 - F(delta) - F(-delta)) / delta^2`.
pub fn chi_finite_difference(n_spins: usize, g: f64, delta: f64) -> Result<FiniteDifferenceChi> {
    if !(1e-4..=1e-2).contains(&delta) {
        return Err(Error::ShiftOutOfRange(delta));
    }
    let at = ground_sector(n_spins, g)?;
    let up = shifted_overlap(n_spins, g, delta, &at)?;
    let down = shifted_overlap(n_spins, g, -delta, &at)?;
    Ok(FiniteDifferenceChi { chi: (2.0 - up - down) / (delta * delta), parity: at.parity, degenerate: at.degenerate })
}
