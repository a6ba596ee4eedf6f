//! Closed-form results for the four-site XX ring in a uniform field.
//!
//! These serve as independent oracles for the numeric path. They cover the
//! sixteen levels with their eigenstates and the alternate-pair reduced
//! state `rho_13` with everything derived from it. Valid for `N = 4`,
//! `Delta = 0` only.
//!
//! Every hyperbolic cosine is expanded into exponentials and all terms are
//! evaluated relative to the largest exponent, so the Boltzmann sums stay
//! finite at any positive temperature.

use std::f64::consts::SQRT_2;

use crate::error::{domain, Error, Result};
use crate::linalg::{c, CMatrix, CVector, C64};
use crate::spectral::DensityMatrix;

/// `E_0 .. E_15` in the labelling of the eigenstates returned by
/// [`analytic_eigenstates`].
pub fn analytic_spectrum(j: f64, b: f64) -> [f64; 16] {
    let s = 2.0 * SQRT_2 * j;
    [
        -4.0 * b,
        2.0 * j - 2.0 * b,
        -2.0 * b,
        -2.0 * j - 2.0 * b,
        -2.0 * b,
        s,
        -s,
        0.0,
        0.0,
        0.0,
        0.0,
        2.0 * j + 2.0 * b,
        2.0 * b,
        -2.0 * j + 2.0 * b,
        2.0 * b,
        4.0 * b,
    ]
}

fn basis(bits: &str) -> usize {
    usize::from_str_radix(bits, 2).expect("binary ket label")
}

fn state(terms: &[(C64, &str)]) -> CVector {
    let mut v = CVector::zeros(16);
    for &(amp, bits) in terms {
        v[basis(bits)] += amp;
    }
    v
}

/// Four translation-eigenstate combinations of the kets `k0..k3` with
/// phases `1, p, p^2, p^3` and prefactor 1/2.
fn magnon(kets: [&str; 4], p: C64) -> CVector {
    let half = c(0.5, 0.0);
    state(&[
        (half, kets[0]),
        (half * p, kets[1]),
        (half * p * p, kets[2]),
        (half * p * p * p, kets[3]),
    ])
}

/// The sixteen normalised eigenstates `|psi_0> .. |psi_15>`. They do not
/// depend on `J` or `B`.
pub fn analytic_eigenstates() -> Vec<CVector> {
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let q = c(SQRT_2 / 4.0, 0.0);
    let h = c(0.5, 0.0);
    let r = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let single = ["0001", "0010", "0100", "1000"];
    let pairs = ["0011", "0110", "1100", "1001"];
    let triple = ["1110", "1101", "1011", "0111"];
    let pair_sym = |sign: f64| {
        state(&[
            (q, "0011"),
            (q, "0110"),
            (q, "1100"),
            (q, "1001"),
            (h * sign, "0101"),
            (h * sign, "1010"),
        ])
    };
    vec![
        state(&[(one, "0000")]),
        magnon(single, one),
        magnon(single, i),
        magnon(single, -one),
        magnon(single, -i),
        pair_sym(1.0),
        pair_sym(-1.0),
        magnon(pairs, i),
        magnon(pairs, -one),
        state(&[(r, "0101"), (-r, "1010")]),
        magnon(pairs, -i),
        magnon(triple, one),
        magnon(triple, i),
        magnon(triple, -one),
        magnon(triple, -i),
        state(&[(one, "1111")]),
    ]
}

/// Unnormalised entries of `Z * rho_13` in the basis `|00>, |01>, |10>, |11>`:
///
/// ```text
///          ( u 0 0 0 )
///  Z rho = ( 0 w y 0 )
///          ( 0 y w 0 )
///          ( 0 0 0 v )
/// ```
///
/// All five numbers share the factor `exp(log_scale)`, i.e. the true value
/// of `u` is `u * exp(log_scale)`. Ratios such as `u / z` are unaffected.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rho13Entries {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub y: f64,
    pub z_partition: f64,
    pub log_scale: f64,
}

impl Rho13Entries {
    /// `ln Z`.
    pub fn log_partition(&self) -> f64 {
        self.z_partition.ln() + self.log_scale
    }

    /// `(u, v, w, y)` divided by `Z`: the actual matrix entries.
    pub fn normalized(&self) -> (f64, f64, f64, f64) {
        let z = self.z_partition;
        (self.u / z, self.v / z, self.w / z, self.y / z)
    }

    /// `(u, v, w, y, Z)` with the scale factor applied; may overflow at
    /// low temperature.
    pub fn unscaled(&self) -> (f64, f64, f64, f64, f64) {
        let s = self.log_scale.exp();
        (self.u * s, self.v * s, self.w * s, self.y * s, self.z_partition * s)
    }

    /// `(2 / Z) max(|y| - sqrt(u v), 0)`.
    pub fn concurrence(&self) -> f64 {
        let (u, v, _, y) = self.normalized();
        (2.0 * (y.abs() - (u * v).sqrt())).max(0.0)
    }

    pub fn to_density_matrix(&self) -> DensityMatrix {
        let (u, v, w, y) = self.normalized();
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(u, 0.0);
        m[(1, 1)] = c(w, 0.0);
        m[(2, 2)] = c(w, 0.0);
        m[(3, 3)] = c(v, 0.0);
        m[(1, 2)] = c(y, 0.0);
        m[(2, 1)] = c(y, 0.0);
        DensityMatrix::from_matrix_unchecked(m)
    }
}

/// Sum of `coeff * exp(exponent)` terms, kept as (scaled sum, shift).
struct ExpSum<'a>(&'a [(f64, f64)]);

impl ExpSum<'_> {
    fn max_exponent(&self) -> f64 {
        self.0.iter().map(|&(_, a)| a).fold(f64::NEG_INFINITY, f64::max)
    }

    fn eval_shifted(&self, shift: f64) -> f64 {
        self.0.iter().map(|&(k, a)| k * (a - shift).exp()).sum()
    }
}

fn check_temperature(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain(format!(
            "closed forms need a finite positive temperature, got {t}"
        )));
    }
    Ok(1.0 / t)
}

/// Boltzmann sums `u`, `v`, `y` of `rho_13`, the partition function, and
/// `w = (Z - u - v) / 2` from unit trace.
pub fn analytic_rho13(j: f64, b: f64, t: f64) -> Result<Rho13Entries> {
    let beta = check_temperature(t)?;
    let p = (2.0 * j + 2.0 * b) * beta;
    let m = (2.0 * j - 2.0 * b) * beta;
    let s = 2.0 * SQRT_2 * j * beta;
    let b2 = 2.0 * b * beta;
    let b4 = 4.0 * b * beta;

    let u = [
        (0.5, 0.0),
        (0.5, p),
        (0.5, -m),
        (0.25, s),
        (0.25, -s),
        (1.0, b2),
        (1.0, b4),
    ];
    let v = [
        (0.5, 0.0),
        (0.5, -p),
        (0.5, m),
        (0.25, s),
        (0.25, -s),
        (1.0, -b2),
        (1.0, -b4),
    ];
    let y = [
        (-0.5, 0.0),
        (0.25, p),
        (0.25, -p),
        (0.25, m),
        (0.25, -m),
        (0.25, s),
        (0.25, -s),
        (-0.5, b2),
        (-0.5, -b2),
    ];
    let z = [
        (4.0, 0.0),
        (2.0, b2),
        (2.0, -b2),
        (1.0, b4),
        (1.0, -b4),
        (1.0, p),
        (1.0, -p),
        (1.0, m),
        (1.0, -m),
        (1.0, s),
        (1.0, -s),
    ];
    // every exponent of u, v, y also appears in z
    let shift = ExpSum(&z).max_exponent();
    let u = ExpSum(&u).eval_shifted(shift);
    let v = ExpSum(&v).eval_shifted(shift);
    let y = ExpSum(&y).eval_shifted(shift);
    let z = ExpSum(&z).eval_shifted(shift);
    Ok(Rho13Entries {
        u,
        v,
        w: (z - u - v) / 2.0,
        y,
        z_partition: z,
        log_scale: shift,
    })
}

/// `ln Z` from the closed form.
pub fn analytic_log_partition(j: f64, b: f64, t: f64) -> Result<f64> {
    Ok(analytic_rho13(j, b, t)?.log_partition())
}

/// `Z` from the closed form; `+inf` once it exceeds `f64::MAX`.
pub fn analytic_partition(j: f64, b: f64, t: f64) -> Result<f64> {
    Ok(analytic_log_partition(j, b, t)?.exp())
}

/// Alternate-pair concurrence `C_13(J, B, T)` for `T > 0`.
pub fn analytic_concurrence_alternate(j: f64, b: f64, t: f64) -> Result<f64> {
    Ok(analytic_rho13(j, b, t)?.concurrence())
}

/// Lower and upper ground-state crossing fields `((sqrt2 - 1)|J|, |J|)`.
pub fn crossing_fields(j: f64) -> (f64, f64) {
    ((SQRT_2 - 1.0) * j.abs(), j.abs())
}

/// `lim_{T->0} C_13`: 0 below the lower crossing, 1/2 between the
/// crossings, 0 above the upper one. Exact crossings are rejected, since
/// the limit there is a degenerate mixture.
pub fn zero_temperature_concurrence(j: f64, b: f64) -> Result<f64> {
    let (low, high) = crossing_fields(j);
    let bb = b.abs();
    let eps = 1e-12 * j.abs().max(1.0);
    for edge in [low, high] {
        if (bb - edge).abs() <= eps {
            return Err(Error::DegeneratePoint(format!(
                "|B| = {bb} sits on a ground-state crossing of J = {j}; \
                 evaluate the ground-state projector instead"
            )));
        }
    }
    Ok(if bb > low && bb < high { 0.5 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_values() {
        let e = analytic_spectrum(1.0, 0.5);
        assert_eq!(e[0], -2.0);
        assert_eq!(e[3], -3.0);
        assert!((e[6] + 2.0 * SQRT_2).abs() < 1e-15);
        assert!(analytic_spectrum(0.0, 0.0).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn psi0_is_vacuum() {
        let s = analytic_eigenstates();
        assert_eq!(s.len(), 16);
        assert_eq!(s[0][0], c(1.0, 0.0));
        assert!((s[0].norm() - 1.0).abs() < 1e-15);
        // |psi_2> carries i on |0010>
        assert_eq!(s[2][2], c(0.0, 0.5));
    }

    #[test]
    fn gram_matrix_is_identity() {
        let s = analytic_eigenstates();
        for a in 0..16 {
            for b in 0..16 {
                let ip = s[a].dotc(&s[b]);
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - c(expect, 0.0)).norm() < 1e-12, "<{a}|{b}> = {ip}");
            }
        }
    }

    #[test]
    fn infinite_temperature_entries() {
        let r = analytic_rho13(1.0, 0.0, 1e9).unwrap();
        let (u, v, w, y, z) = r.unscaled();
        // rho_13 -> I/4, so u = v = w = Z/4
        assert!((u - 4.0).abs() < 1e-6);
        assert!((v - 4.0).abs() < 1e-6);
        assert!((w - 4.0).abs() < 1e-6);
        assert!(y.abs() < 1e-6);
        assert!((z - 16.0).abs() < 1e-6);
    }

    #[test]
    fn field_reflection() {
        for &(j, b, t) in &[(1.0, 0.3, 0.4), (-0.8, 1.2, 0.07), (2.0, -0.5, 3.0)] {
            let p = analytic_rho13(j, b, t).unwrap().normalized();
            let m = analytic_rho13(j, -b, t).unwrap().normalized();
            assert!((p.0 - m.1).abs() < 1e-14);
            assert!((p.3 - m.3).abs() < 1e-14);
        }
    }

    #[test]
    fn trace_identity() {
        let r = analytic_rho13(1.0, 0.5, 0.5).unwrap();
        assert!((r.u + 2.0 * r.w + r.v - r.z_partition).abs() <= 1e-10 * r.z_partition);
        assert!(r.u > 0.0 && r.v > 0.0 && r.w > 0.0);
    }

    #[test]
    fn low_temperature_is_finite() {
        let r = analytic_rho13(1.0, 0.7, 1e-4).unwrap();
        assert!(r.z_partition.is_finite() && r.log_scale.is_finite());
        assert!((r.concurrence() - 0.5).abs() < 1e-6);
        assert!(analytic_partition(1.0, 0.7, 1e-4).unwrap().is_infinite());
    }

    #[test]
    fn concurrence_values() {
        assert_eq!(analytic_concurrence_alternate(1.0, 0.0, 0.5).unwrap(), 0.0);
        assert!((analytic_concurrence_alternate(1.0, 0.7, 0.01).unwrap() - 0.5).abs() < 1e-6);
        assert!(analytic_concurrence_alternate(1.0, 0.7, 0.0).is_err());
        assert!(analytic_rho13(1.0, 0.7, -1.0).is_err());
    }

    #[test]
    fn zero_temperature_branches() {
        assert_eq!(zero_temperature_concurrence(1.0, 0.2).unwrap(), 0.0);
        assert_eq!(zero_temperature_concurrence(1.0, 0.7).unwrap(), 0.5);
        assert_eq!(zero_temperature_concurrence(1.0, 1.3).unwrap(), 0.0);
        assert_eq!(zero_temperature_concurrence(-1.0, -0.7).unwrap(), 0.5);
        assert!(matches!(
            zero_temperature_concurrence(1.0, 1.0),
            Err(Error::DegeneratePoint(_))
        ));
        assert!(zero_temperature_concurrence(1.0, SQRT_2 - 1.0).is_err());
    }
}
