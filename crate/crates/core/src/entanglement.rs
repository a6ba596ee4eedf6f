//! Partial traces and the pairwise / single-site entanglement measures.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{jacobi_eigh, CMatrix};
use crate::spectral::DensityMatrix;
use crate::spin_model::{pauli_site_operator, SiteOperator};

/// Kept sites for a partial trace, 1-based and strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteSubset {
    sites: Vec<usize>,
}

impl SiteSubset {
    pub fn new(sites: Vec<usize>, n_sites: usize) -> Result<Self> {
        if sites.is_empty() {
            return Err(invalid("site subset must be non-empty"));
        }
        if sites.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!("sites must be strictly increasing, got {sites:?}")));
        }
        if sites[0] == 0 || *sites.last().unwrap() > n_sites {
            return Err(invalid(format!("sites {sites:?} out of range 1..={n_sites}")));
        }
        Ok(Self { sites })
    }

    /// Unordered pair; stored sorted.
    pub fn pair(i: usize, j: usize, n_sites: usize) -> Result<Self> {
        Self::new(vec![i.min(j), i.max(j)], n_sites)
    }

    pub fn single(site: usize, n_sites: usize) -> Result<Self> {
        Self::new(vec![site], n_sites)
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

/// Scatter the bits of `local` (big-endian over the listed sites) into a
/// full basis index.
fn scatter(local: usize, sites: &[usize], n_sites: usize) -> usize {
    let k = sites.len();
    sites.iter().enumerate().fold(0, |acc, (pos, &s)| {
        acc | (((local >> (k - 1 - pos)) & 1) << (n_sites - s))
    })
}

/// Reduced state on `keep`; the reduced basis inherits the kept sites'
/// order (first kept site is the most significant bit).
pub fn partial_trace(rho: &DensityMatrix, keep: &SiteSubset, n_sites: usize) -> Result<DensityMatrix> {
    if n_sites == 0 || n_sites > crate::spin_model::MAX_SITES || rho.dim() != 1 << n_sites {
        return Err(invalid(format!(
            "density matrix of dimension {} does not match {n_sites} sites",
            rho.dim()
        )));
    }
    if *keep.sites().last().unwrap() > n_sites {
        return Err(invalid("kept site out of range"));
    }
    let traced: Vec<usize> = (1..=n_sites).filter(|s| !keep.sites().contains(s)).collect();
    let kept_idx: Vec<usize> = (0..1usize << keep.len())
        .map(|a| scatter(a, keep.sites(), n_sites))
        .collect();
    let env_idx: Vec<usize> = (0..1usize << traced.len())
        .map(|r| scatter(r, &traced, n_sites))
        .collect();
    let m = rho.matrix();
    let d = kept_idx.len();
    let out = CMatrix::from_fn(d, d, |a, b| {
        env_idx.iter().map(|&r| m[(kept_idx[a] | r, kept_idx[b] | r)]).sum()
    });
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Wootters concurrence of a two-qubit state.
///
/// The `lambda_i` are the square roots of the eigenvalues of
/// `rho (sy x sy) rho* (sy x sy)`, conjugation in the computational basis.
/// They equal the singular values of `sqrt(rho) (sy x sy) sqrt(rho)*`,
/// which is how they are computed here: `sqrt(rho)` comes from a Jacobi
/// eigendecomposition (eigenvalues clipped at zero) and the singular values
/// from an SVD, so no small squared quantity is ever square-rooted.
pub fn wootters_concurrence(rho2: &DensityMatrix) -> Result<f64> {
    if rho2.dim() != 4 {
        return Err(invalid(format!(
            "concurrence needs a two-qubit (4x4) state, got dimension {}",
            rho2.dim()
        )));
    }
    let yy = {
        let y = pauli_site_operator(SiteOperator::Y, 1, 1).expect("single site");
        y.kronecker(&y)
    };
    let (probs, vecs) = jacobi_eigh(rho2.matrix());
    let mut scaled = vecs.clone();
    for (k, p) in probs.iter().enumerate() {
        scaled.column_mut(k).scale_mut(p.max(0.0).sqrt());
    }
    let sqrt_rho = scaled * vecs.adjoint();
    let a = &sqrt_rho * yy * sqrt_rho.map(|z| z.conj());
    let mut lambdas: Vec<f64> = a.svd(false, false).singular_values.iter().copied().collect();
    lambdas.sort_by(|x, y| y.total_cmp(x));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// `IC_i = sqrt(2 [1 - Tr(rho_i^2)])`.
///
/// Meaningful as an entanglement measure only for pure global states; for
/// mixed input the formula is applied as written.
pub fn i_concurrence(rho_global: &DensityMatrix, site: usize, n_sites: usize) -> Result<f64> {
    let reduced = partial_trace(rho_global, &SiteSubset::single(site, n_sites)?, n_sites)?;
    Ok((2.0 * (1.0 - reduced.purity())).max(0.0).sqrt())
}

/// Global entanglement `Q = (1/N) sum_i IC_i^2`.
pub fn global_entanglement(rho_global: &DensityMatrix, n_sites: usize) -> Result<f64> {
    let mut sum = 0.0;
    for site in 1..=n_sites {
        sum += i_concurrence(rho_global, site, n_sites)?.powi(2);
    }
    Ok(sum / n_sites as f64)
}

/// Pairwise concurrences of one global state together with its site
/// i-concurrences. `residual` is `1 - sum_{i<j} C_ij^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub n_sites: usize,
    /// Keyed by `(i, j)` with `i < j`.
    pub pair_concurrences: BTreeMap<(usize, usize), f64>,
    pub i_concurrences: Vec<f64>,
    pub global_q: f64,
    pub residual: f64,
}

impl EntanglementReport {
    pub fn pair(&self, i: usize, j: usize) -> Option<f64> {
        self.pair_concurrences.get(&(i.min(j), i.max(j))).copied()
    }

    pub fn sum_squared_concurrence(&self) -> f64 {
        self.pair_concurrences.values().map(|x| x * x).sum()
    }
}

pub fn full_report(rho_global: &DensityMatrix, n_sites: usize) -> Result<EntanglementReport> {
    let mut pair_concurrences = BTreeMap::new();
    for i in 1..=n_sites {
        for j in i + 1..=n_sites {
            let rho2 = partial_trace(rho_global, &SiteSubset::pair(i, j, n_sites)?, n_sites)?;
            pair_concurrences.insert((i, j), wootters_concurrence(&rho2)?);
        }
    }
    let i_concurrences = (1..=n_sites)
        .map(|s| i_concurrence(rho_global, s, n_sites))
        .collect::<Result<Vec<_>>>()?;
    let global_q = i_concurrences.iter().map(|x| x * x).sum::<f64>() / n_sites as f64;
    let residual = 1.0 - pair_concurrences.values().map(|x| x * x).sum::<f64>();
    Ok(EntanglementReport {
        n_sites,
        pair_concurrences,
        i_concurrences,
        global_q,
        residual,
    })
}

/// Concurrence of the reduced state on the pair `(i, j)`.
pub fn pair_concurrence(rho_global: &DensityMatrix, i: usize, j: usize, n_sites: usize) -> Result<f64> {
    let rho2 = partial_trace(rho_global, &SiteSubset::pair(i, j, n_sites)?, n_sites)?;
    wootters_concurrence(&rho2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_diff, CVector};

    fn ket(bits: &str) -> CVector {
        let idx = usize::from_str_radix(bits, 2).unwrap();
        let mut v = CVector::zeros(1 << bits.len());
        v[idx] = c(1.0, 0.0);
        v
    }

    fn psi3() -> CVector {
        (ket("0001") - ket("0010") + ket("0100") - ket("1000")) * c(0.5, 0.0)
    }

    #[test]
    fn subset_validation() {
        assert!(SiteSubset::new(vec![], 4).is_err());
        assert!(SiteSubset::new(vec![3, 1], 4).is_err());
        assert!(SiteSubset::new(vec![1, 1], 4).is_err());
        assert!(SiteSubset::new(vec![0, 2], 4).is_err());
        assert!(SiteSubset::new(vec![2, 5], 4).is_err());
        assert_eq!(SiteSubset::pair(3, 1, 4).unwrap().sites(), &[1, 3]);
    }

    #[test]
    fn trace_of_product_state() {
        let rho = DensityMatrix::pure(&ket("0000")).unwrap();
        let r = partial_trace(&rho, &SiteSubset::pair(1, 3, 4).unwrap(), 4).unwrap();
        assert_eq!(r.matrix(), DensityMatrix::pure(&ket("00")).unwrap().matrix());
    }

    #[test]
    fn kept_site_order_is_inherited() {
        // |0110>: site 2 and 3 up. Keeping {1, 2} gives |01>, {2, 4} gives |10>.
        let rho = DensityMatrix::pure(&ket("0110")).unwrap();
        let r12 = partial_trace(&rho, &SiteSubset::pair(1, 2, 4).unwrap(), 4).unwrap();
        assert_eq!(r12.entry(1, 1), c(1.0, 0.0));
        let r24 = partial_trace(&rho, &SiteSubset::pair(2, 4, 4).unwrap(), 4).unwrap();
        assert_eq!(r24.entry(2, 2), c(1.0, 0.0));
    }

    #[test]
    fn alternate_pair_of_psi3() {
        let rho = DensityMatrix::pure(&psi3()).unwrap();
        let r = partial_trace(&rho, &SiteSubset::pair(1, 3, 4).unwrap(), 4).unwrap();
        let s = (ket("01") + ket("10")) * c(0.5, 0.0);
        let expect = DensityMatrix::pure(&ket("00")).unwrap().matrix() * c(0.5, 0.0) + &s * s.adjoint();
        assert!(max_abs_diff(r.matrix(), &expect) < 1e-15);
        assert!((wootters_concurrence(&r).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let rho = DensityMatrix::pure(&ket("000")).unwrap();
        assert!(partial_trace(&rho, &SiteSubset::pair(1, 2, 4).unwrap(), 4).is_err());
        assert!(wootters_concurrence(&rho).is_err());
    }

    #[test]
    fn bell_and_product() {
        let bell = (ket("01") + ket("10")) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let c_bell = wootters_concurrence(&DensityMatrix::pure(&bell).unwrap()).unwrap();
        assert!((c_bell - 1.0).abs() < 1e-12);
        let prod = DensityMatrix::pure(&ket("00")).unwrap();
        assert_eq!(wootters_concurrence(&prod).unwrap(), 0.0);
        let mixed = DensityMatrix::diagonal(&[0.25; 4]).unwrap();
        assert_eq!(wootters_concurrence(&mixed).unwrap(), 0.0);
    }

    #[test]
    fn werner_state_concurrence() {
        // p |Psi-><Psi-| + (1 - p) I/4 has C = max(0, (3p - 1) / 2)
        let s = (ket("01") - ket("10")) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        for &p in &[0.2, 1.0 / 3.0, 0.5, 0.9] {
            let m = &s * s.adjoint() * c(p, 0.0) + CMatrix::identity(4, 4) * c((1.0 - p) / 4.0, 0.0);
            let got = wootters_concurrence(&DensityMatrix::new(m).unwrap()).unwrap();
            let expect = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((got - expect).abs() < 1e-7, "p = {p}: {got} vs {expect}");
        }
    }

    #[test]
    fn complex_phase_bell() {
        // (|00> + i|11>)/sqrt2 is maximally entangled
        let s = (ket("00") + ket("11") * c(0.0, 1.0)) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let got = wootters_concurrence(&DensityMatrix::pure(&s).unwrap()).unwrap();
        assert!((got - 1.0).abs() < 1e-12);
    }

    #[test]
    fn i_concurrence_product_and_w() {
        let rho = DensityMatrix::pure(&ket("0000")).unwrap();
        for s in 1..=4 {
            assert_eq!(i_concurrence(&rho, s, 4).unwrap(), 0.0);
        }
        assert_eq!(global_entanglement(&rho, 4).unwrap(), 0.0);
        let w = (ket("0001") + ket("0010") + ket("0100") + ket("1000")) * c(0.5, 0.0);
        let rho = DensityMatrix::pure(&w).unwrap();
        for s in 1..=4 {
            assert!((i_concurrence(&rho, s, 4).unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn report_for_product_state() {
        let rho = DensityMatrix::pure(&ket("0000")).unwrap();
        let r = full_report(&rho, 4).unwrap();
        assert_eq!(r.pair_concurrences.len(), 6);
        assert!(r.pair_concurrences.values().all(|&x| x == 0.0));
        assert!(r.i_concurrences.iter().all(|&x| x == 0.0));
        assert_eq!(r.global_q, 0.0);
        assert_eq!(r.residual, 1.0);
        assert_eq!(r.pair(3, 1), Some(0.0));
    }

    #[test]
    fn report_for_psi3() {
        let r = full_report(&DensityMatrix::pure(&psi3()).unwrap(), 4).unwrap();
        for &c in r.pair_concurrences.values() {
            assert!((c - 0.5).abs() < 1e-9);
        }
        assert!((r.global_q - 0.75).abs() < 1e-12);
        assert!((r.global_q - 0.5 * r.sum_squared_concurrence()).abs() < 1e-9);
    }
}
