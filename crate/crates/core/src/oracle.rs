//! Brute-force reference computations.
//!
//! Two validators that share nothing with the closed forms in [`crate::echo`]
//! beyond the dispersion:
//!
//! * a `(k, -k)` block oracle that builds the 4×4 block Hamiltonian in the
//!   basis `|00⟩, |11⟩, |10⟩, |01⟩`, exponentiates it through a Hermitian
//!   eigendecomposition and takes `Tr[U₊ ρ U₋†]` numerically;
//! * a Fock-space oracle that writes the quadratic fermion Hamiltonian on a
//!   c-cyclic ring of `N ≤ 12` sites as a dense `2^N` matrix (split by
//!   fermion parity) and diagonalises it outright.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::echo::{EchoSeries, InitialState};
use crate::error::{param, Error, Result};
use crate::spectrum::{ChainSpec, Dispersion, FieldSet, DEGENERATE_OMEGA};

pub type BlockMatrix = Matrix4<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorMethod {
    /// Printed closed form with `Λ = Ω/2`, `φ = 2πk/N`.
    Analytic,
    /// `exp(-iHt)` through eigendecomposition of the Hermitian block.
    Numeric,
}

fn check_mode(k: usize, chain: &ChainSpec) -> Result<()> {
    if k == 0 || k > chain.modes() {
        return param(format!("mode index k must be in 1..={} (got {k})", chain.modes()));
    }
    Ok(())
}

/// Block Hamiltonian of mode `k` at field `lambda`, with diagonal constant
/// `-2cos x + shift`.
pub fn block_hamiltonian(k: usize, lambda: f64, chain: &ChainSpec, shift: f64) -> Result<BlockMatrix> {
    check_mode(k, chain)?;
    let x = chain.momentum(k);
    let d = Dispersion::at(lambda, chain.gamma(), x);
    let base = -2.0 * x.cos() + shift;
    let (s, co) = d.theta.sin_cos();
    let mut h = BlockMatrix::zeros();
    h[(0, 0)] = c(-d.omega * co + base);
    h[(0, 1)] = I * d.omega * s;
    h[(1, 0)] = -I * d.omega * s;
    h[(1, 1)] = c(d.omega * co + base);
    h[(2, 2)] = c(base);
    h[(3, 3)] = c(base);
    Ok(h)
}

/// `f(H) = V f(w) V†` for a Hermitian block.
fn hermitian_function(h: &BlockMatrix, f: impl Fn(f64) -> Complex64) -> BlockMatrix {
    let eig = SymmetricEigen::new(*h);
    let v = eig.eigenvectors;
    let diag = BlockMatrix::from_diagonal(&eig.eigenvalues.map(f));
    v * diag * v.adjoint()
}

pub fn block_propagator(
    k: usize,
    lambda: f64,
    chain: &ChainSpec,
    t: f64,
    method: PropagatorMethod,
) -> Result<BlockMatrix> {
    match method {
        PropagatorMethod::Numeric => {
            let h = block_hamiltonian(k, lambda, chain, 0.0)?;
            Ok(hermitian_function(&h, |w| Complex64::from_polar(1.0, -w * t)))
        }
        PropagatorMethod::Analytic => {
            check_mode(k, chain)?;
            let x = chain.momentum(k);
            let d = Dispersion::at(lambda, chain.gamma(), x);
            let big_lambda = d.omega / 2.0;
            let (sn, cs) = (2.0 * t * big_lambda).sin_cos();
            let (st, ct) = d.theta.sin_cos();
            let mut u = BlockMatrix::zeros();
            u[(0, 0)] = I * ct * sn + cs;
            u[(0, 1)] = c(st * sn);
            u[(1, 0)] = c(-st * sn);
            u[(1, 1)] = -I * ct * sn + cs;
            u[(2, 2)] = c(1.0);
            u[(3, 3)] = c(1.0);
            Ok(u * Complex64::from_polar(1.0, 2.0 * t * x.cos()))
        }
    }
}

/// Block density of the initial chain state for mode `k`.
pub fn block_initial_density(k: usize, chain: &ChainSpec, lambda_i: f64, init: &InitialState) -> Result<BlockMatrix> {
    let h = block_hamiltonian(k, lambda_i, chain, 0.0)?;
    let eig = SymmetricEigen::new(h);
    let w = eig.eigenvalues;
    let e_min = w.iter().cloned().fold(f64::INFINITY, f64::min);
    match init.beta() {
        None => {
            let d = Dispersion::at(lambda_i, chain.gamma(), chain.momentum(k));
            if d.omega <= DEGENERATE_OMEGA {
                // fully degenerate block; pick the state the zero-angle convention describes
                let mut rho = BlockMatrix::zeros();
                rho[(0, 0)] = c(1.0);
                return Ok(rho);
            }
            let idx = w.imin();
            let v = eig.eigenvectors.column(idx).into_owned();
            Ok(v * v.adjoint())
        }
        Some(beta) => {
            let v = eig.eigenvectors;
            let weights = w.map(|e| c((-beta * (e - e_min)).exp()));
            let z: f64 = weights.iter().map(|z| z.re).sum();
            Ok(v * BlockMatrix::from_diagonal(&weights) * v.adjoint() / c(z))
        }
    }
}

fn mode_factor_impl(
    k: usize,
    chain: &ChainSpec,
    fields: &FieldSet,
    init: &InitialState,
    t: f64,
    shift: f64,
) -> Result<Complex64> {
    let rho = block_initial_density(k, chain, fields.lambda_i, init)?;
    let prop = |lambda: f64| -> Result<BlockMatrix> {
        let h = block_hamiltonian(k, lambda, chain, shift)?;
        Ok(hermitian_function(&h, |w| Complex64::from_polar(1.0, -w * t)))
    };
    let up = prop(fields.lambda_plus)?;
    let um = prop(fields.lambda_minus)?;
    Ok((up * rho * um.adjoint()).trace())
}

/// `Tr[U₊ ρ U₋†]` for block `k`, all matrix functions taken numerically.
pub fn mode_factor_oracle(
    k: usize,
    chain: &ChainSpec,
    fields: &FieldSet,
    init: &InitialState,
    t: f64,
) -> Result<Complex64> {
    mode_factor_impl(k, chain, fields, init, t, 0.0)
}

/// As [`mode_factor_oracle`], with both branch Hamiltonians shifted by the same constant.
pub fn mode_factor_oracle_shifted(
    k: usize,
    chain: &ChainSpec,
    fields: &FieldSet,
    init: &InitialState,
    t: f64,
    shift: f64,
) -> Result<Complex64> {
    mode_factor_impl(k, chain, fields, init, t, shift)
}

pub const MAX_FOCK_SITES: usize = 12;

/// Ground states closer than this are reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

fn check_fock(chain: &ChainSpec) -> Result<()> {
    if chain.sites() > MAX_FOCK_SITES {
        return Err(Error::ChainTooLarge { n: chain.sites(), max: MAX_FOCK_SITES });
    }
    Ok(())
}

/// Apply a string of fermion operators (rightmost first) to basis state `s`.
/// `true` marks a creation operator. Returns the new state and its sign.
fn apply_ops(ops: &[(usize, bool)], mut s: usize) -> Option<(usize, f64)> {
    let mut sign = 1.0;
    for &(site, create) in ops.iter().rev() {
        let occupied = s >> site & 1 == 1;
        if occupied == create {
            return None;
        }
        if (s & ((1 << site) - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        s ^= 1 << site;
    }
    Some((s, sign))
}

/// Matrix of the fermion chain Hamiltonian on the basis states `basis`
/// (which must be closed under the Hamiltonian, e.g. a parity sector).
///
/// `H = -Σ_l [(a†_{l+1} a_l + a†_l a_{l+1}) + γ(a_{l+1} a_l + a†_l a†_{l+1}) - λ(1 - 2 a†_l a_l)]`
/// with `a_{N+1} ≡ a_1`.
fn fock_matrix(chain: &ChainSpec, lambda: f64, basis: &[usize]) -> DMatrix<f64> {
    let n = chain.sites();
    let gamma = chain.gamma();
    let dim = basis.len();
    let mut index = vec![usize::MAX; 1 << n];
    for (i, &s) in basis.iter().enumerate() {
        index[s] = i;
    }
    let mut terms: Vec<(f64, [(usize, bool); 2])> = Vec::with_capacity(4 * n);
    for l in 0..n {
        let r = (l + 1) % n;
        terms.push((-1.0, [(r, true), (l, false)]));
        terms.push((-1.0, [(l, true), (r, false)]));
        terms.push((-gamma, [(r, false), (l, false)]));
        terms.push((-gamma, [(l, true), (r, true)]));
    }
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for (col, &s) in basis.iter().enumerate() {
        let occupied = s.count_ones() as f64;
        h[(col, col)] += lambda * (n as f64 - 2.0 * occupied);
        for (coef, ops) in &terms {
            if *coef == 0.0 {
                continue;
            }
            if let Some((s2, sign)) = apply_ops(ops, s) {
                let row = index[s2];
                debug_assert!(row != usize::MAX, "basis not closed under H");
                h[(row, col)] += coef * sign;
            }
        }
    }
    h
}

/// Dense real symmetric eigendecomposition, eigenvalues ascending.
///
/// The Fock sectors are massively degenerate; this solver keeps the
/// residual `‖HV - VW‖` at round-off there.
fn sym_eigen(h: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = h.nrows();
    let m = Mat::<f64>::from_fn(n, n, |i, j| h[(i, j)]);
    let eig = m
        .self_adjoint_eigen(Side::Lower)
        .expect("symmetric eigendecomposition of a finite matrix");
    let (u, s) = (eig.U(), eig.S().column_vector());
    (DVector::from_fn(n, |i, _| s[i]), DMatrix::from_fn(n, n, |i, j| u[(i, j)]))
}

fn parity_basis(n: usize, parity: u32) -> Vec<usize> {
    (0..1usize << n).filter(|s| s.count_ones() % 2 == parity).collect()
}

/// Full `2^N × 2^N` Fock Hamiltonian in the occupation basis.
pub fn fock_hamiltonian(chain: &ChainSpec, lambda: f64) -> Result<DMatrix<f64>> {
    check_fock(chain)?;
    let basis: Vec<usize> = (0..1usize << chain.sites()).collect();
    Ok(fock_matrix(chain, lambda, &basis))
}

/// Sorted many-body spectrum.
pub fn fock_spectrum(chain: &ChainSpec, lambda: f64) -> Result<Vec<f64>> {
    check_fock(chain)?;
    let mut all = Vec::with_capacity(1 << chain.sites());
    for parity in 0..2 {
        let h = fock_matrix(chain, lambda, &parity_basis(chain.sites(), parity));
        all.extend(sym_eigen(&h).0.iter());
    }
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// Near-degenerate ground state found by the Fock oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Degeneracy {
    /// `|E_even - E_odd|` of the sector ground states.
    pub gap: f64,
    pub even_f: Vec<f64>,
    pub odd_f: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockEcho {
    pub series: EchoSeries,
    pub degeneracy: Option<Degeneracy>,
}

struct Eigen {
    values: DVector<f64>,
    vectors: DMatrix<f64>,
}

struct Sector {
    initial: Eigen,
    plus: Eigen,
    minus: Eigen,
}

impl Sector {
    fn new(chain: &ChainSpec, fields: &FieldSet, parity: u32) -> Self {
        let basis = parity_basis(chain.sites(), parity);
        let eig = |lambda| {
            let (values, vectors) = sym_eigen(&fock_matrix(chain, lambda, &basis));
            Eigen { values, vectors }
        };
        Self {
            initial: eig(fields.lambda_i),
            plus: eig(fields.lambda_plus),
            minus: eig(fields.lambda_minus),
        }
    }

    fn ground(&self) -> (f64, usize) {
        let idx = self.initial.values.imin();
        (self.initial.values[idx], idx)
    }

    /// `D(t) = Tr[ρ U₋† U₊]` for `ρ` given as `Σ_n p_n |n⟩⟨n|` over
    /// eigenvectors of the initial Hamiltonian.
    fn echo(&self, weights: &[(usize, f64)], times: &[f64]) -> Vec<Complex64> {
        let vp = &self.plus.vectors;
        let vm = &self.minus.vectors;
        let dim = vp.nrows();
        let mut rho = DMatrix::<f64>::zeros(dim, dim);
        for &(n, p) in weights {
            let v = self.initial.vectors.column(n);
            rho += p * v * v.transpose();
        }
        let overlap = vm.transpose() * vp;
        let r = vp.transpose() * &rho * vm;
        // P_ab = O_ab R_ba, D = Σ_ab e^{i w⁻_a t} P_ab e^{-i w⁺_b t}
        let p = overlap.component_mul(&r.transpose());
        let wp = &self.plus.values;
        let wm = &self.minus.values;
        times
            .iter()
            .map(|&t| {
                let up: Vec<Complex64> = wp.iter().map(|w| Complex64::from_polar(1.0, -w * t)).collect();
                (0..dim)
                    .map(|a| {
                        let inner: Complex64 = (0..dim).map(|b| p[(a, b)] * up[b]).sum();
                        Complex64::from_polar(1.0, wm[a] * t) * inner
                    })
                    .sum()
            })
            .collect()
    }
}

/// Coherence factor from exact diagonalisation of the fermion ring.
pub fn fock_coherence_ed(chain: &ChainSpec, fields: &FieldSet, init: &InitialState, times: &[f64]) -> Result<FockEcho> {
    check_fock(chain)?;
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return param("times must be finite and non-negative");
    }
    let sectors = [Sector::new(chain, fields, 0), Sector::new(chain, fields, 1)];
    let mut degeneracy = None;
    let d_values: Vec<Complex64> = match init.beta() {
        None => {
            let (e_even, i_even) = sectors[0].ground();
            let (e_odd, i_odd) = sectors[1].ground();
            let even = || sectors[0].echo(&[(i_even, 1.0)], times);
            let odd = || sectors[1].echo(&[(i_odd, 1.0)], times);
            let gap = (e_even - e_odd).abs();
            if gap < DEGENERACY_GAP {
                let (de, d_o) = (even(), odd());
                log::warn!("Fock ground state is degenerate across parity sectors (gap {gap:.2e})");
                degeneracy = Some(Degeneracy {
                    gap,
                    even_f: de.iter().map(|d| d.norm()).collect(),
                    odd_f: d_o.iter().map(|d| d.norm()).collect(),
                });
                de
            } else if e_even < e_odd {
                even()
            } else {
                odd()
            }
        }
        Some(beta) => {
            let e_min = sectors
                .iter()
                .flat_map(|s| s.initial.values.iter().cloned())
                .fold(f64::INFINITY, f64::min);
            let boltzmann: Vec<Vec<(usize, f64)>> = sectors
                .iter()
                .map(|s| {
                    s.initial
                        .values
                        .iter()
                        .enumerate()
                        .map(|(n, e)| (n, (-beta * (e - e_min)).exp()))
                        .collect()
                })
                .collect();
            let z: f64 = boltzmann.iter().flatten().map(|(_, w)| w).sum();
            let mut total = vec![Complex64::new(0.0, 0.0); times.len()];
            for (sector, weights) in sectors.iter().zip(&boltzmann) {
                let normalised: Vec<(usize, f64)> = weights.iter().map(|&(n, w)| (n, w / z)).collect();
                for (acc, d) in total.iter_mut().zip(sector.echo(&normalised, times)) {
                    *acc += d;
                }
            }
            total
        }
    };
    let f_values: Vec<f64> = d_values.iter().map(|d| d.norm()).collect();
    let series = EchoSeries {
        chain: *chain,
        fields: *fields,
        init: *init,
        times: times.to_vec(),
        log_f: f_values.iter().map(|f| f.ln()).collect(),
        f_values,
        d_values,
    };
    Ok(FockEcho { series, degeneracy })
}
