//! Passive linear-optical networks: transfer matrices, circuits, Fock-space
//! evolution and the permanent formula for transition amplitudes.
//!
//! Convention: a transfer matrix `U` maps `a_i^dag -> sum_j U[j,i] a_j^dag`,
//! so column `i` lists where a photon entering mode `i` ends up.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{binomial, validate_modes, Occupation, PureState};

pub const UNITARY_TOL: f64 = 1e-10;

/// Largest matrix accepted by [`permanent`].
pub const PERMANENT_MAX: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    m: DMatrix<Complex64>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl TransferMatrix {
    /// Wraps `m` after checking `||U^dag U - I||_max <= 1e-10`.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidParameter("transfer matrix must be square".into()));
        }
        let dev = unitarity_deviation(&m);
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(TransferMatrix { m })
    }

    pub fn identity(dim: usize) -> Self {
        TransferMatrix { m: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    /// Real symmetric coupler `[[sqrt(1-r), sqrt r], [sqrt r, -sqrt(1-r)]]`.
    pub fn coupler(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidParameter(format!("reflectivity {r} outside [0,1]")));
        }
        let t = (1.0 - r).sqrt();
        let s = r.sqrt();
        Ok(TransferMatrix { m: DMatrix::from_row_slice(2, 2, &[c(t), c(s), c(s), c(-t)]) })
    }

    /// Single-mode phase `exp(i phi)`.
    pub fn phase(phi: f64) -> Self {
        TransferMatrix { m: DMatrix::from_element(1, 1, Complex64::from_polar(1.0, phi)) }
    }

    /// Diagonal of single-mode phases.
    pub fn phases(phis: &[f64]) -> Self {
        let mut m = DMatrix::identity(phis.len(), phis.len());
        for (i, &p) in phis.iter().enumerate() {
            m[(i, i)] = Complex64::from_polar(1.0, p);
        }
        TransferMatrix { m }
    }

    /// Sylvester Hadamard of size `m = 2^k`, normalized by `m^(-1/2)`.
    pub fn hadamard(m: usize) -> Result<Self> {
        if m == 0 || !m.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("Hadamard size {m} is not a power of two")));
        }
        let norm = (m as f64).powf(-0.5);
        let mat = DMatrix::from_fn(m, m, |i, j| {
            let sign = if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            c(sign * norm)
        });
        Ok(TransferMatrix { m: mat })
    }

    /// `omega^(jk)/sqrt(m)` with `omega = exp(2 pi i / m)`.
    pub fn dft(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("DFT size must be positive".into()));
        }
        let norm = (m as f64).powf(-0.5);
        let mat = DMatrix::from_fn(m, m, |j, k| {
            let e = ((j * k) % m) as f64;
            Complex64::from_polar(norm, 2.0 * PI * e / m as f64)
        });
        Ok(TransferMatrix { m: mat })
    }

    /// Mach-Zehnder built from two couplers of reflectivity
    /// `sin^2(arcsin(sqrt r)/2)` around a phase of `pi` (on) or `0` (off).
    pub fn mzi_switchable(r: f64, on: bool) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidParameter(format!("reflectivity {r} outside [0,1]")));
        }
        let half = (r.sqrt().asin() / 2.0).sin().powi(2);
        let outer = Self::coupler(half)?;
        let mid = Self::phases(&[if on { PI } else { 0.0 }, 0.0]);
        Ok(outer.mul(&mid).mul(&outer))
    }

    /// `self * other`: apply `other` first.
    pub fn mul(&self, other: &TransferMatrix) -> TransferMatrix {
        TransferMatrix { m: &self.m * &other.m }
    }

    pub fn adjoint(&self) -> TransferMatrix {
        TransferMatrix { m: self.m.adjoint() }
    }

    /// Acts as `self` on `modes` (in order) and as identity elsewhere.
    pub fn embed(&self, modes: &[usize], total: usize) -> Result<TransferMatrix> {
        if modes.len() != self.dim() {
            return Err(Error::ModeMismatch { left: self.dim(), right: modes.len() });
        }
        validate_modes(modes, total)?;
        let mut m = DMatrix::identity(total, total);
        for (a, &ma) in modes.iter().enumerate() {
            for (b, &mb) in modes.iter().enumerate() {
                m[(ma, mb)] = self.m[(a, b)];
            }
        }
        Ok(TransferMatrix { m })
    }

    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.m)
    }
}

/// Largest entry magnitude.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let p = m.adjoint() * m;
    let n = m.nrows();
    let mut d: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let e = if i == j { c(1.0) } else { c(0.0) };
            d = d.max((p[(i, j)] - e).norm());
        }
    }
    d
}

#[derive(Clone, Debug, PartialEq)]
pub enum ElementKind {
    Coupler(f64),
    Phase(f64),
    Multiport(TransferMatrix),
    Switchable { r: f64, on: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub kind: ElementKind,
    pub modes: Vec<usize>,
}

impl Element {
    pub fn matrix(&self) -> Result<TransferMatrix> {
        match &self.kind {
            ElementKind::Coupler(r) => TransferMatrix::coupler(*r),
            ElementKind::Phase(p) => Ok(TransferMatrix::phase(*p)),
            ElementKind::Multiport(u) => Ok(u.clone()),
            ElementKind::Switchable { r, on } => TransferMatrix::mzi_switchable(*r, *on),
        }
    }
}

/// An ordered list of elements acting on a fixed number of modes.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    modes: usize,
    elements: Vec<Element>,
}

impl Circuit {
    pub fn new(modes: usize) -> Self {
        Circuit { modes, elements: Vec::new() }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn push(mut self, kind: ElementKind, modes: &[usize]) -> Result<Self> {
        let arity = match &kind {
            ElementKind::Coupler(_) | ElementKind::Switchable { .. } => 2,
            ElementKind::Phase(_) => 1,
            ElementKind::Multiport(u) => u.dim(),
        };
        if modes.len() != arity {
            return Err(Error::ModeMismatch { left: arity, right: modes.len() });
        }
        validate_modes(modes, self.modes)?;
        let el = Element { kind, modes: modes.to_vec() };
        el.matrix()?;
        self.elements.push(el);
        Ok(self)
    }

    pub fn coupler(self, r: f64, a: usize, b: usize) -> Result<Self> {
        self.push(ElementKind::Coupler(r), &[a, b])
    }

    pub fn phase(self, phi: f64, mode: usize) -> Result<Self> {
        self.push(ElementKind::Phase(phi), &[mode])
    }

    pub fn multiport(self, u: TransferMatrix, modes: &[usize]) -> Result<Self> {
        self.push(ElementKind::Multiport(u), modes)
    }

    pub fn switchable(self, r: f64, on: bool, a: usize, b: usize) -> Result<Self> {
        self.push(ElementKind::Switchable { r, on }, &[a, b])
    }

    /// Appends every element of `other`, which must have the same mode count.
    pub fn then(mut self, other: &Circuit) -> Result<Self> {
        if other.modes != self.modes {
            return Err(Error::ModeMismatch { left: self.modes, right: other.modes });
        }
        self.elements.extend(other.elements.iter().cloned());
        Ok(self)
    }

    /// Total transfer matrix, later elements multiplying from the left.
    pub fn compose(&self) -> Result<TransferMatrix> {
        let mut u = TransferMatrix::identity(self.modes);
        for el in &self.elements {
            u = el.matrix()?.embed(&el.modes, self.modes)?.mul(&u);
        }
        Ok(u)
    }

    /// Evolves `s` element by element.
    pub fn apply(&self, s: &PureState) -> Result<PureState> {
        if s.modes() != self.modes {
            return Err(Error::ModeMismatch { left: self.modes, right: s.modes() });
        }
        let mut cur = s.clone();
        for el in &self.elements {
            cur = match &el.kind {
                ElementKind::Phase(p) => cur.phase_modes(&[(el.modes[0], *p)]),
                _ => {
                    let u = el.matrix()?;
                    if u.dim() == 2 {
                        apply_two_mode(&u, el.modes[0], el.modes[1], &cur)
                    } else {
                        apply_on_modes(&u, &el.modes, &cur)?
                    }
                }
            };
        }
        Ok(cur)
    }
}

/// Binomial expansion of a 2x2 transfer matrix on modes `(p, q)`.
pub fn apply_two_mode(u: &TransferMatrix, p: usize, q: usize, s: &PureState) -> PureState {
    let (u00, u01, u10, u11) = (u.get(0, 0), u.get(0, 1), u.get(1, 0), u.get(1, 1));
    let mut cache: HashMap<(u8, u8), Vec<(u8, Complex64)>> = HashMap::new();
    let mut out = PureState::zero(s.modes());
    for (occ, amp) in s.terms() {
        let (n0, n1) = (occ.get(p), occ.get(q));
        let row = cache.entry((n0, n1)).or_insert_with(|| {
            let total = (n0 + n1) as usize;
            let mut coef = vec![Complex64::default(); total + 1];
            for k in 0..=n0 as usize {
                let ck = u00.powu(k as u32) * u10.powu(n0 as u32 - k as u32) * binomial(n0 as usize, k);
                for l in 0..=n1 as usize {
                    let cl = u01.powu(l as u32) * u11.powu(n1 as u32 - l as u32) * binomial(n1 as usize, l);
                    coef[k + l] += ck * cl;
                }
            }
            let norm = (fact(n0 as usize) * fact(n1 as usize)).sqrt();
            coef.into_iter()
                .enumerate()
                .map(|(a, cf)| (a as u8, cf * (fact(a) * fact(total - a)).sqrt() / norm))
                .filter(|(_, cf)| cf.norm() >= crate::fock::PRUNE_TOL)
                .collect()
        });
        let mut counts = occ.counts().to_vec();
        for &(a, cf) in row.iter() {
            counts[p] = a;
            counts[q] = n0 + n1 - a;
            out.add_amplitude(Occupation::new(counts.clone()), amp * cf);
        }
    }
    out.prune();
    out
}

fn fact(n: usize) -> f64 {
    crate::fock::factorial(n)
}

/// Expands `prod_i (sum_j U[j,i] a_j^dag)^(n_i) / sqrt(n_i!)` on the modes of `u`.
fn expand_multiport(u: &TransferMatrix, input: &Occupation) -> Vec<(Occupation, Complex64)> {
    let k = u.dim();
    let mut poly: HashMap<Vec<u8>, Complex64> = HashMap::new();
    poly.insert(vec![0; k], c(1.0));
    for i in 0..k {
        for _ in 0..input.get(i) {
            let mut next: HashMap<Vec<u8>, Complex64> = HashMap::with_capacity(poly.len() * k);
            for (mono, cf) in &poly {
                for j in 0..k {
                    let uji = u.get(j, i);
                    if uji.norm() < 1e-300 {
                        continue;
                    }
                    let mut m2 = mono.clone();
                    m2[j] += 1;
                    *next.entry(m2).or_default() += cf * uji;
                }
            }
            poly = next;
        }
    }
    let norm_in = input.sqrt_factorials();
    let mut out: Vec<(Occupation, Complex64)> = poly
        .into_iter()
        .map(|(mono, cf)| {
            let o = Occupation::new(mono);
            let a = cf * o.sqrt_factorials() / norm_in;
            (o, a)
        })
        .filter(|(_, a)| a.norm() >= crate::fock::PRUNE_TOL)
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Applies `u` on the listed modes of `s` (identity elsewhere).
pub fn apply_on_modes(u: &TransferMatrix, modes: &[usize], s: &PureState) -> Result<PureState> {
    if modes.len() != u.dim() {
        return Err(Error::ModeMismatch { left: u.dim(), right: modes.len() });
    }
    validate_modes(modes, s.modes())?;
    let mut cache: HashMap<Occupation, Vec<(Occupation, Complex64)>> = HashMap::new();
    let mut out = PureState::zero(s.modes());
    for (occ, amp) in s.terms() {
        let sub = occ.select(modes);
        let row = cache.entry(sub.clone()).or_insert_with(|| expand_multiport(u, &sub));
        let mut counts = occ.counts().to_vec();
        for (o, cf) in row.iter() {
            for (idx, &m) in modes.iter().enumerate() {
                counts[m] = o.get(idx);
            }
            out.add_amplitude(Occupation::new(counts.clone()), amp * cf);
        }
    }
    out.prune();
    Ok(out)
}

/// Applies a full-size transfer matrix to every mode.
pub fn apply_transfer(u: &TransferMatrix, s: &PureState) -> Result<PureState> {
    let modes: Vec<usize> = (0..u.dim()).collect();
    apply_on_modes(u, &modes, s)
}

/// Ryser's formula with Gray-code updates of the row sums.
pub fn permanent(m: &DMatrix<Complex64>) -> Result<Complex64> {
    if !m.is_square() {
        return Err(Error::InvalidParameter("permanent needs a square matrix".into()));
    }
    let n = m.nrows();
    if n > PERMANENT_MAX {
        return Err(Error::InvalidParameter(format!("permanent size {n} exceeds {PERMANENT_MAX}")));
    }
    if n == 0 {
        return Ok(c(1.0));
    }
    let mut row_sums = vec![Complex64::default(); n];
    let mut total = Complex64::default();
    let mut gray: u32 = 0;
    for k in 1u32..(1u32 << n) {
        let next = k ^ (k >> 1);
        let bit = (gray ^ next).trailing_zeros() as usize;
        let adding = next & (1 << bit) != 0;
        for (i, rs) in row_sums.iter_mut().enumerate() {
            if adding {
                *rs += m[(i, bit)];
            } else {
                *rs -= m[(i, bit)];
            }
        }
        gray = next;
        let prod: Complex64 = row_sums.iter().product();
        if next.count_ones() % 2 == n as u32 % 2 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// `<out| U |in>` via `per(U_sub)/sqrt(prod n_i! prod m_j!)`; zero when the
/// photon numbers differ.
pub fn transition_amplitude(
    u: &TransferMatrix,
    input: &Occupation,
    output: &Occupation,
) -> Result<Complex64> {
    let d = u.dim();
    if input.modes() != d || output.modes() != d {
        return Err(Error::ModeMismatch { left: d, right: input.modes().max(output.modes()) });
    }
    if input.total() != output.total() {
        return Ok(Complex64::default());
    }
    let cols: Vec<usize> = (0..d).flat_map(|i| std::iter::repeat_n(i, input.get(i) as usize)).collect();
    let rows: Vec<usize> = (0..d).flat_map(|j| std::iter::repeat_n(j, output.get(j) as usize)).collect();
    let n = cols.len();
    let sub = DMatrix::from_fn(n, n, |a, b| u.get(rows[a], cols[b]));
    Ok(permanent(&sub)? / (input.sqrt_factorials() * output.sqrt_factorials()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::occupations;

    const R2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn naive_permanent(m: &DMatrix<Complex64>) -> Complex64 {
        fn rec(m: &DMatrix<Complex64>, row: usize, used: &mut Vec<bool>) -> Complex64 {
            if row == m.nrows() {
                return c(1.0);
            }
            let mut acc = Complex64::default();
            for col in 0..m.ncols() {
                if !used[col] {
                    used[col] = true;
                    acc += m[(row, col)] * rec(m, row + 1, used);
                    used[col] = false;
                }
            }
            acc
        }
        rec(m, 0, &mut vec![false; m.ncols()])
    }

    #[test]
    fn coupler_values() {
        let h = TransferMatrix::coupler(0.5).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[c(R2), c(R2), c(R2), c(-R2)]);
        assert!(max_abs(&(h.matrix() - want)) < 1e-15);
        assert_eq!(TransferMatrix::coupler(0.0).unwrap().get(0, 0), c(1.0));
        let s = TransferMatrix::coupler(1.0).unwrap();
        assert_eq!(s.get(0, 1), c(1.0));
        assert_eq!(s.get(1, 0), c(1.0));
        assert!(s.get(0, 0).norm() < 1e-15);
        assert!(TransferMatrix::coupler(1.2).is_err());
    }

    #[test]
    fn hadamard_and_dft() {
        let h2 = TransferMatrix::hadamard(2).unwrap();
        let h4 = TransferMatrix::hadamard(4).unwrap();
        let kron = h2.matrix().kronecker(h2.matrix());
        assert!(max_abs(&(h4.matrix() - kron)) < 1e-15);
        for m in [2, 4, 8] {
            let h = TransferMatrix::hadamard(m).unwrap();
            assert!(h.mul(&h).unitarity_deviation() < 1e-12);
            assert!(max_abs(&(h.mul(&h).matrix() - DMatrix::<Complex64>::identity(m, m))) < 1e-12);
        }
        assert!(TransferMatrix::hadamard(6).is_err());
        let f = TransferMatrix::dft(3).unwrap();
        assert!(f.unitarity_deviation() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                assert!((f.get(i, j).norm() - 3f64.powf(-0.5)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn hadamard8_from_stages() {
        // H8 = (pairwise H2 across halves) * (H4 on each half), up to a mode order.
        let h4 = TransferMatrix::hadamard(4).unwrap();
        let mut circ = Circuit::new(8)
            .multiport(h4.clone(), &[0, 1, 2, 3])
            .unwrap()
            .multiport(h4, &[4, 5, 6, 7])
            .unwrap();
        for i in 0..4 {
            circ = circ.coupler(0.5, i, i + 4).unwrap();
        }
        let u = circ.compose().unwrap();
        let h8 = TransferMatrix::hadamard(8).unwrap();
        assert!(max_abs(&(u.matrix() - h8.matrix())) < 1e-14);
    }

    #[test]
    fn mzi_matches_coupler_probabilities() {
        let off = TransferMatrix::mzi_switchable(0.3, false).unwrap();
        assert!((off.get(0, 0).norm_sqr() - 1.0).abs() < 1e-12);
        assert!((off.get(1, 1).norm_sqr() - 1.0).abs() < 1e-12);
        let on = TransferMatrix::mzi_switchable(0.3, true).unwrap();
        assert!((on.get(0, 1).norm_sqr() - 0.3).abs() < 1e-10);
        let zero = TransferMatrix::mzi_switchable(0.0, true).unwrap();
        assert!((zero.get(0, 0).norm() - 1.0).abs() < 1e-12);
        let input = PureState::fock(&[2, 1]).unwrap();
        let a = Circuit::new(2).switchable(0.3, true, 0, 1).unwrap().apply(&input).unwrap();
        let b = Circuit::new(2).coupler(0.3, 0, 1).unwrap().apply(&input).unwrap();
        for o in occupations(2, 3) {
            assert!((a.amplitude(&o).norm_sqr() - b.amplitude(&o).norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn embed_compose() {
        let h = TransferMatrix::hadamard(2).unwrap();
        let circ = Circuit::new(4).multiport(h.clone(), &[1, 3]).unwrap().multiport(h, &[1, 3]).unwrap();
        let u = circ.compose().unwrap();
        assert!(max_abs(&(u.matrix() - DMatrix::<Complex64>::identity(4, 4))) < 1e-15);
        assert_eq!(Circuit::new(3).compose().unwrap(), TransferMatrix::identity(3));
        assert!(Circuit::new(3).coupler(0.5, 0, 3).is_err());
        assert!(Circuit::new(3).coupler(0.5, 1, 1).is_err());
    }

    #[test]
    fn hong_ou_mandel() {
        let s = PureState::fock(&[1, 1]).unwrap();
        let out = Circuit::new(2).coupler(0.5, 0, 1).unwrap().apply(&s).unwrap();
        assert!((out.amplitude(&Occupation::from([2, 0])) - c(R2)).norm() < 1e-14);
        assert!((out.amplitude(&Occupation::from([0, 2])) + c(R2)).norm() < 1e-14);
        assert!(out.amplitude(&Occupation::from([1, 1])).norm() < 1e-14);
        let h = TransferMatrix::hadamard(2).unwrap();
        let a = transition_amplitude(&h, &Occupation::from([1, 1]), &Occupation::from([1, 1])).unwrap();
        assert!(a.norm() < 1e-15);
        let id = TransferMatrix::identity(3);
        let n = Occupation::from([2, 0, 1]);
        assert!((transition_amplitude(&id, &n, &n).unwrap() - c(1.0)).norm() < 1e-15);
        assert_eq!(
            transition_amplitude(&id, &n, &Occupation::from([1, 0, 1])).unwrap(),
            Complex64::default()
        );
    }

    #[test]
    fn identity_circuit_is_noop() {
        let s = PureState::fock(&[1, 0, 2]).unwrap();
        assert_eq!(Circuit::new(3).apply(&s).unwrap(), s);
    }

    #[test]
    fn permanent_small() {
        assert!((permanent(&DMatrix::identity(3, 3)).unwrap() - c(1.0)).norm() < 1e-15);
        let ones = DMatrix::from_element(2, 2, c(1.0));
        assert!((permanent(&ones).unwrap() - c(2.0)).norm() < 1e-15);
        assert!(permanent(&DMatrix::from_element(2, 3, c(1.0))).is_err());
        assert!(permanent(&DMatrix::from_element(21, 21, c(0.0))).is_err());
        let m = DMatrix::from_fn(5, 5, |i, j| Complex64::new((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i + 2 * j) as f64 * 0.1));
        assert!((permanent(&m).unwrap() - naive_permanent(&m)).norm() < 1e-12);
    }
}
