//! Ring Hamiltonians built from lifted single-site Pauli operators.
//!
//! Basis convention: site 1 is the most significant bit of the basis index,
//! and a set bit means spin up, so `|0001>` is index 1 on four sites and
//! `sigma^z |1> = +|1>`.

use std::fmt;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{c, hermiticity_defect, CMatrix, C64};

pub const MIN_SITES: usize = 2;
pub const MAX_SITES: usize = 12;

/// Tolerance on `|H_ij - conj(H_ji)|` accepted by [`HermitianOperator::new`].
pub const HERMITICITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Site `n_sites + 1` is identified with site 1.
    #[default]
    Periodic,
}

/// Everything needed to assemble a ring Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub coupling_j: f64,
    pub field_b: f64,
    pub anisotropy_delta: f64,
    pub n_sites: usize,
    pub boundary: Boundary,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            coupling_j: 1.0,
            field_b: 0.0,
            anisotropy_delta: 0.0,
            n_sites: 4,
            boundary: Boundary::Periodic,
        }
    }
}

impl ModelParams {
    pub fn new(coupling_j: f64, field_b: f64, anisotropy_delta: f64, n_sites: usize) -> Result<Self> {
        let p = Self {
            coupling_j,
            field_b,
            anisotropy_delta,
            n_sites,
            boundary: Boundary::Periodic,
        };
        p.validate()?;
        Ok(p)
    }

    /// Four-site XX ring with the given coupling and field.
    pub fn xx4(coupling_j: f64, field_b: f64) -> Self {
        Self {
            coupling_j,
            field_b,
            ..Self::default()
        }
    }

    pub fn with_field(mut self, field_b: f64) -> Self {
        self.field_b = field_b;
        self
    }

    pub fn with_coupling(mut self, coupling_j: f64) -> Self {
        self.coupling_j = coupling_j;
        self
    }

    pub fn with_anisotropy(mut self, anisotropy_delta: f64) -> Self {
        self.anisotropy_delta = anisotropy_delta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_SITES..=MAX_SITES).contains(&self.n_sites) {
            return Err(invalid(format!(
                "n_sites must lie in [{MIN_SITES}, {MAX_SITES}], got {}",
                self.n_sites
            )));
        }
        for (name, v) in [
            ("coupling_j", self.coupling_j),
            ("field_b", self.field_b),
            ("anisotropy_delta", self.anisotropy_delta),
        ] {
            if !v.is_finite() {
                return Err(invalid(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }
}

/// A computational basis ket `|b_1 b_2 ... b_N>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    index: usize,
    n_sites: usize,
}

impl BasisState {
    pub fn from_index(index: usize, n_sites: usize) -> Result<Self> {
        check_sites(n_sites)?;
        if index >= 1 << n_sites {
            return Err(invalid(format!("basis index {index} out of range for {n_sites} sites")));
        }
        Ok(Self { index, n_sites })
    }

    /// Bits in site order, `bits[0]` is site 1.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        check_sites(bits.len())?;
        let mut index = 0;
        for &b in bits {
            if b > 1 {
                return Err(invalid(format!("occupation bit must be 0 or 1, got {b}")));
            }
            index = (index << 1) | b as usize;
        }
        Ok(Self {
            index,
            n_sites: bits.len(),
        })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Occupation of a 1-based site.
    pub fn bit(&self, site: usize) -> u8 {
        site_bit(self.index, site, self.n_sites) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (1..=self.n_sites).map(|s| self.bit(s)).collect()
    }

    pub fn up_count(&self) -> u32 {
        self.index.count_ones()
    }
}

impl std::str::FromStr for BasisState {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('|').trim_end_matches('>');
        let bits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(invalid(format!("unexpected character {other:?} in ket"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(&bits)
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        write!(f, ">")
    }
}

/// Bit of 1-based `site` in basis index `index`.
#[inline]
pub(crate) fn site_bit(index: usize, site: usize, n_sites: usize) -> usize {
    (index >> (n_sites - site)) & 1
}

fn check_sites(n_sites: usize) -> Result<()> {
    if !(MIN_SITES..=MAX_SITES).contains(&n_sites) && n_sites != 1 {
        return Err(invalid(format!("n_sites must lie in [1, {MAX_SITES}], got {n_sites}")));
    }
    Ok(())
}

/// Dense Hermitian matrix (Hamiltonians, observables).
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(invalid(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = hermiticity_defect(&matrix);
        if !(defect <= HERMITICITY_TOL) {
            return Err(invalid(format!(
                "operator is not Hermitian (max |A - A^dagger| = {defect:e})"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }
}

/// Single-site operator kinds that can be lifted onto the ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteOperator {
    Plus,
    Minus,
    Z,
    Y,
}

impl SiteOperator {
    /// 2x2 matrix in the `{|0>, |1>}` basis.
    pub fn local(self) -> Matrix2<C64> {
        let o = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        match self {
            // sigma^+ |0> = |1>
            SiteOperator::Plus => Matrix2::new(o, o, one, o),
            SiteOperator::Minus => Matrix2::new(o, one, o, o),
            SiteOperator::Z => Matrix2::new(-one, o, o, one),
            // -i sigma^+ + i sigma^-
            SiteOperator::Y => Matrix2::new(o, c(0.0, 1.0), c(0.0, -1.0), o),
        }
    }
}

/// `kind` acting on `site` (1-based), identity elsewhere, built as a
/// Kronecker chain over all `n_sites` sites.
pub fn pauli_site_operator(kind: SiteOperator, site: usize, n_sites: usize) -> Result<CMatrix> {
    check_sites(n_sites)?;
    if site == 0 || site > n_sites {
        return Err(invalid(format!("site {site} out of range 1..={n_sites}")));
    }
    let local = kind.local();
    let local = CMatrix::from_fn(2, 2, |i, j| local[(i, j)]);
    let id = CMatrix::identity(2, 2);
    let mut out = CMatrix::identity(1, 1);
    for s in 1..=n_sites {
        out = out.kronecker(if s == site { &local } else { &id });
    }
    Ok(out)
}

/// Accumulate `coeff * (A_{s1} ⊗ B_{s2} ⊗ ...)` into `h` without building
/// the full Kronecker product. Sites in `factors` must be distinct.
fn add_local_product(h: &mut CMatrix, coeff: C64, factors: &[(usize, Matrix2<C64>)], n_sites: usize) {
    let dim = 1usize << n_sites;
    let k = factors.len();
    let mask: usize = factors.iter().map(|&(s, _)| 1usize << (n_sites - s)).sum();
    for row in 0..dim {
        let base = row & !mask;
        for combo in 0..(1usize << k) {
            let mut col = base;
            let mut amp = coeff;
            for (f, (site, m)) in factors.iter().enumerate() {
                let cb = (combo >> f) & 1;
                let rb = site_bit(row, *site, n_sites);
                amp *= m[(rb, cb)];
                col |= cb << (n_sites - site);
            }
            if amp != C64::new(0.0, 0.0) {
                h[(row, col)] += amp;
            }
        }
    }
}

fn neighbor(site: usize, n_sites: usize) -> usize {
    site % n_sites + 1
}

/// `H = J sum_n (s+_n s-_{n+1} + s-_n s+_{n+1}) + B sum_n sz_n` on a periodic
/// ring. The anisotropy field of `params` is ignored.
pub fn build_xx_hamiltonian(params: &ModelParams) -> Result<HermitianOperator> {
    params.validate()?;
    let n = params.n_sites;
    let mut h = CMatrix::zeros(params.dim(), params.dim());
    let j = c(params.coupling_j, 0.0);
    let plus = SiteOperator::Plus.local();
    let minus = SiteOperator::Minus.local();
    let z = SiteOperator::Z.local();
    for site in 1..=n {
        let next = neighbor(site, n);
        add_local_product(&mut h, j, &[(site, plus), (next, minus)], n);
        add_local_product(&mut h, j, &[(site, minus), (next, plus)], n);
        add_local_product(&mut h, c(params.field_b, 0.0), &[(site, z)], n);
    }
    HermitianOperator::new(h)
}

/// XX Hamiltonian plus `(J Delta / 2) sum_n sz_n sz_{n+1}`.
pub fn build_xxz_hamiltonian(params: &ModelParams) -> Result<HermitianOperator> {
    let mut h = build_xx_hamiltonian(params)?.into_matrix();
    let n = params.n_sites;
    let zz = c(params.coupling_j * params.anisotropy_delta / 2.0, 0.0);
    if zz != c(0.0, 0.0) {
        let z = SiteOperator::Z.local();
        for site in 1..=n {
            add_local_product(&mut h, zz, &[(site, z), (neighbor(site, n), z)], n);
        }
    }
    HermitianOperator::new(h)
}

/// `sum_n sz_n`, diagonal with entries `2 * (#up) - N`.
pub fn total_magnetization(n_sites: usize) -> Result<CMatrix> {
    check_sites(n_sites)?;
    let dim = 1usize << n_sites;
    Ok(CMatrix::from_diagonal(&nalgebra::DVector::from_fn(dim, |i, _| {
        c(2.0 * i.count_ones() as f64 - n_sites as f64, 0.0)
    })))
}

/// Cyclic one-site shift `|b_1 ... b_N> -> |b_N b_1 ... b_{N-1}>`.
pub fn translation_operator(n_sites: usize) -> Result<CMatrix> {
    check_sites(n_sites)?;
    let dim = 1usize << n_sites;
    let mut t = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        // the last site (lowest bit) moves to the front
        let shifted = (i >> 1) | ((i & 1) << (n_sites - 1));
        t[(shifted, i)] = c(1.0, 0.0);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, max_abs_diff};
    use nalgebra::DVector;

    fn ket(s: &str) -> DVector<C64> {
        let b: BasisState = s.parse().unwrap();
        let mut v = DVector::zeros(1 << b.n_sites());
        v[b.index()] = c(1.0, 0.0);
        v
    }

    #[test]
    fn basis_index_is_big_endian() {
        let b: BasisState = "|0001>".parse().unwrap();
        assert_eq!(b.index(), 1);
        let b: BasisState = "1000".parse().unwrap();
        assert_eq!(b.index(), 8);
        assert_eq!(b.bit(1), 1);
        assert_eq!(b.to_string(), "|1000>");
        for i in 0..16 {
            let b = BasisState::from_index(i, 4).unwrap();
            assert_eq!(BasisState::from_bits(&b.bits()).unwrap(), b);
        }
        assert!(BasisState::from_index(16, 4).is_err());
        assert!("01x1".parse::<BasisState>().is_err());
    }

    #[test]
    fn sigma_z_convention() {
        let z = pauli_site_operator(SiteOperator::Z, 1, 1).unwrap();
        assert_eq!(&z * ket("1"), ket("1"));
        assert_eq!(&z * ket("0"), -ket("0"));
    }

    #[test]
    fn raising_on_site_two() {
        let p = pauli_site_operator(SiteOperator::Plus, 2, 4).unwrap();
        assert_eq!(&p * ket("0000"), ket("0100"));
        assert_eq!(&p * ket("0100"), DVector::zeros(16));
    }

    #[test]
    fn lowering_is_adjoint_of_raising() {
        let p = pauli_site_operator(SiteOperator::Plus, 3, 4).unwrap();
        let m = pauli_site_operator(SiteOperator::Minus, 3, 4).unwrap();
        assert_eq!(p.adjoint(), m);
        let y = pauli_site_operator(SiteOperator::Y, 3, 4).unwrap();
        let expect = p * c(0.0, -1.0) + m * c(0.0, 1.0);
        assert_eq!(y, expect);
    }

    #[test]
    fn site_out_of_range() {
        assert!(pauli_site_operator(SiteOperator::Z, 0, 4).is_err());
        assert!(pauli_site_operator(SiteOperator::Z, 5, 4).is_err());
    }

    #[test]
    fn xx_diagonal_all_down() {
        let h = build_xx_hamiltonian(&ModelParams::xx4(1.0, 0.5)).unwrap();
        assert!((h.entry(0, 0).re + 2.0).abs() < 1e-15);
    }

    #[test]
    fn xx_hopping_entry() {
        // the n = 3 bond moves the up spin from site 4 to site 3
        let h = build_xx_hamiltonian(&ModelParams::xx4(1.0, 0.0)).unwrap();
        assert_eq!(h.entry(2, 1), c(1.0, 0.0));
    }

    #[test]
    fn pure_zeeman_spectrum() {
        let h = build_xx_hamiltonian(&ModelParams::xx4(0.0, 1.0)).unwrap();
        let m = h.matrix();
        for i in 0..16 {
            for j in 0..16 {
                if i != j {
                    assert_eq!(m[(i, j)], c(0.0, 0.0));
                }
            }
            let ups = (i as u32).count_ones() as f64;
            assert_eq!(m[(i, i)].re, 2.0 * ups - 4.0);
        }
    }

    #[test]
    fn xxz_reduces_to_xx() {
        let p = ModelParams::xx4(1.0, 0.0);
        assert_eq!(build_xxz_hamiltonian(&p).unwrap(), build_xx_hamiltonian(&p).unwrap());
    }

    #[test]
    fn xxz_diagonals() {
        let h = build_xxz_hamiltonian(&ModelParams::xx4(1.0, 0.0).with_anisotropy(1.0)).unwrap();
        assert!((h.entry(0, 0).re - 2.0).abs() < 1e-15);
        let h = build_xxz_hamiltonian(&ModelParams::xx4(1.0, 0.5).with_anisotropy(1.0)).unwrap();
        assert!((h.entry(15, 15).re - 4.0).abs() < 1e-15);
    }

    /// Independent route: the same sum written with products of lifted
    /// single-site operators.
    fn xxz_from_site_products(p: &ModelParams) -> CMatrix {
        let n = p.n_sites;
        let op = |k, s| pauli_site_operator(k, s, n).unwrap();
        let mut h = CMatrix::zeros(p.dim(), p.dim());
        for s in 1..=n {
            let t = neighbor(s, n);
            h += (op(SiteOperator::Plus, s) * op(SiteOperator::Minus, t)
                + op(SiteOperator::Minus, s) * op(SiteOperator::Plus, t))
                * c(p.coupling_j, 0.0);
            h += op(SiteOperator::Z, s) * c(p.field_b, 0.0);
            h += op(SiteOperator::Z, s) * op(SiteOperator::Z, t) * c(p.coupling_j * p.anisotropy_delta / 2.0, 0.0);
        }
        h
    }

    #[test]
    fn assembly_matches_operator_products() {
        for &(j, b, d, n) in &[
            (1.0, 0.5, 0.0, 4),
            (-0.7, 0.3, 1.4, 4),
            (1.3, -0.2, -0.6, 3),
            (0.9, 0.1, 0.5, 5),
        ] {
            let p = ModelParams::new(j, b, d, n).unwrap();
            let h = build_xxz_hamiltonian(&p).unwrap();
            assert!(max_abs_diff(h.matrix(), &xxz_from_site_products(&p)) < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(1.0, 0.0, 0.0, 1).is_err());
        assert!(ModelParams::new(1.0, 0.0, 0.0, 13).is_err());
        assert!(ModelParams::new(f64::NAN, 0.0, 0.0, 4).is_err());
        let p = ModelParams {
            n_sites: 20,
            ..ModelParams::default()
        };
        assert!(build_xx_hamiltonian(&p).is_err());
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(HermitianOperator::new(m).is_err());
        assert!(HermitianOperator::new(CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn translation_commutes_with_ring() {
        let t = translation_operator(4).unwrap();
        assert_eq!(&t * ket("0001"), ket("1000"));
        assert_eq!(&t * ket("1000"), ket("0100"));
        let h = build_xxz_hamiltonian(&ModelParams::xx4(0.8, 0.3).with_anisotropy(0.4)).unwrap();
        assert!(commutator(h.matrix(), &t).norm() < 1e-12);
    }

    #[test]
    fn magnetization_matches_site_sum() {
        let m = total_magnetization(4).unwrap();
        let mut s = CMatrix::zeros(16, 16);
        for site in 1..=4 {
            s += pauli_site_operator(SiteOperator::Z, site, 4).unwrap();
        }
        assert_eq!(m, s);
    }
}
