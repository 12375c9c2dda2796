//! Sparse multimode Fock states and dual-rail bookkeeping.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Amplitudes with magnitude below this are dropped after every operation.
pub const PRUNE_TOL: f64 = 1e-13;

/// Tolerance on `|norm² - 1|` for a state to count as normalized.
pub const NORM_TOL: f64 = 1e-10;

/// Photon counts per mode.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occupation(Vec<u8>);

impl Occupation {
    pub fn new(counts: Vec<u8>) -> Self {
        Occupation(counts)
    }

    /// Builds an occupation from signed counts, rejecting negative entries.
    pub fn from_signed(counts: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(counts.len());
        for &c in counts {
            if !(0..=u8::MAX as i64).contains(&c) {
                return Err(Error::InvalidOccupation(format!("{counts:?}")));
            }
            out.push(c as u8);
        }
        Ok(Occupation(out))
    }

    pub fn vacuum(modes: usize) -> Self {
        Occupation(vec![0; modes])
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn counts(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, mode: usize) -> u8 {
        self.0[mode]
    }

    /// Counts on the listed modes, in list order.
    pub fn select(&self, modes: &[usize]) -> Occupation {
        Occupation(modes.iter().map(|&m| self.0[m]).collect())
    }

    /// Occupation with the listed modes removed.
    pub fn remove(&self, modes: &[usize]) -> Occupation {
        Occupation(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| !modes.contains(i))
                .map(|(_, &c)| c)
                .collect(),
        )
    }

    pub fn concat(&self, other: &Occupation) -> Occupation {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Occupation(v)
    }

    /// `sqrt(prod n_i!)`, the normalization of the monomial `prod (a_i^dag)^n_i`.
    pub fn sqrt_factorials(&self) -> f64 {
        self.0.iter().map(|&n| factorial(n as usize)).product::<f64>().sqrt()
    }

    pub fn compact(&self) -> String {
        self.0.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Debug for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}>", self.compact())
    }
}

impl From<&[u8]> for Occupation {
    fn from(v: &[u8]) -> Self {
        Occupation(v.to_vec())
    }
}

impl<const N: usize> From<[u8; N]> for Occupation {
    fn from(v: [u8; N]) -> Self {
        Occupation(v.to_vec())
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// All occupations of `modes` modes holding exactly `photons` photons, in
/// lexicographic order.
pub fn occupations(modes: usize, photons: usize) -> Vec<Occupation> {
    fn rec(modes: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Occupation>) {
        if cur.len() == modes - 1 {
            cur.push(left as u8);
            out.push(Occupation(cur.clone()));
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c as u8);
            rec(modes, left - c, cur, out);
            cur.pop();
        }
    }
    if modes == 0 {
        return if photons == 0 { vec![Occupation(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(modes, photons, &mut Vec::with_capacity(modes), &mut out);
    out.sort();
    out
}

/// A sparse superposition over Fock basis states of a fixed mode count.
#[derive(Clone, PartialEq)]
pub struct PureState {
    modes: usize,
    amps: BTreeMap<Occupation, Complex64>,
}

impl fmt::Debug for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (o, a) in &self.amps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i){:?}", a.re, a.im, o)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PureState {
    /// The zero vector (not a physical state) on `modes` modes.
    pub fn zero(modes: usize) -> Self {
        PureState { modes, amps: BTreeMap::new() }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::basis(Occupation::vacuum(modes))
    }

    pub fn basis(occ: Occupation) -> Self {
        let mut amps = BTreeMap::new();
        let modes = occ.modes();
        amps.insert(occ, Complex64::new(1.0, 0.0));
        PureState { modes, amps }
    }

    /// `makeFock`: normalized basis state from signed counts.
    pub fn fock(counts: &[i64]) -> Result<Self> {
        Ok(Self::basis(Occupation::from_signed(counts)?))
    }

    /// Builds a state from (occupation, amplitude) pairs; repeated keys add.
    pub fn from_terms<I>(modes: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Occupation, Complex64)>,
    {
        let mut s = Self::zero(modes);
        for (o, a) in terms {
            if o.modes() != modes {
                return Err(Error::ModeMismatch { left: modes, right: o.modes() });
            }
            s.add_amplitude(o, a);
        }
        s.prune();
        Ok(s)
    }

    /// Real-coefficient shorthand used for reference states.
    pub(crate) fn from_real(modes: usize, terms: &[(&[u8], f64)]) -> Self {
        Self::from_terms(
            modes,
            terms.iter().map(|(o, a)| (Occupation::from(*o), Complex64::new(*a, 0.0))),
        )
        .expect("reference terms have consistent mode counts")
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amps.iter()
    }

    pub fn amplitude(&self, occ: &Occupation) -> Complex64 {
        self.amps.get(occ).copied().unwrap_or_default()
    }

    pub(crate) fn add_amplitude(&mut self, occ: Occupation, a: Complex64) {
        *self.amps.entry(occ).or_default() += a;
    }

    pub fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() >= PRUNE_TOL);
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut s = PureState {
            modes: self.modes,
            amps: self.amps.iter().map(|(o, a)| (o.clone(), a * c)).collect(),
        };
        s.prune();
        s
    }

    /// Rescaled to unit norm; the zero vector stays zero.
    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr();
        if n == 0.0 {
            return self.clone();
        }
        self.scaled(Complex64::new(1.0 / n.sqrt(), 0.0))
    }

    pub fn add(&self, other: &PureState) -> Result<Self> {
        check_modes(self, other)?;
        let mut s = self.clone();
        for (o, a) in &other.amps {
            s.add_amplitude(o.clone(), *a);
        }
        s.prune();
        Ok(s)
    }

    pub fn tensor(&self, other: &PureState) -> Self {
        let mut s = Self::zero(self.modes + other.modes);
        for (oa, aa) in &self.amps {
            for (ob, ab) in &other.amps {
                s.add_amplitude(oa.concat(ob), aa * ab);
            }
        }
        s.prune();
        s
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_modes(self, other)?;
        let (small, large, conj_small) = if self.len() <= other.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = Complex64::default();
        for (o, a) in &small.amps {
            if let Some(b) = large.amps.get(o) {
                acc += if conj_small { a.conj() * b } else { a * b.conj() };
            }
        }
        Ok(acc)
    }

    /// Total photon number of every term, sorted and deduplicated.
    pub fn photon_numbers(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.amps.keys().map(|o| o.total()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Reorders modes so that new mode `i` is old mode `perm[i]`.
    pub fn permute_modes(&self, perm: &[usize]) -> Result<Self> {
        validate_modes(perm, self.modes)?;
        if perm.len() != self.modes {
            return Err(Error::ModeMismatch { left: self.modes, right: perm.len() });
        }
        let amps = self
            .amps
            .iter()
            .map(|(o, a)| (Occupation(perm.iter().map(|&p| o.0[p]).collect()), *a))
            .collect();
        Ok(PureState { modes: self.modes, amps })
    }

    /// Applies `exp(i phi n_k)` on each listed mode.
    pub fn phase_modes(&self, phases: &[(usize, f64)]) -> Self {
        let amps = self
            .amps
            .iter()
            .map(|(o, a)| {
                let arg: f64 = phases.iter().map(|&(m, p)| p * o.0[m] as f64).sum();
                (o.clone(), a * Complex64::from_polar(1.0, arg))
            })
            .collect();
        PureState { modes: self.modes, amps }
    }

    /// Keeps only the listed modes, requiring every other mode to be empty
    /// in every term. Returns `None` if some term has photons elsewhere.
    pub fn restrict_to(&self, keep: &[usize]) -> Option<Self> {
        let mut s = Self::zero(keep.len());
        for (o, a) in &self.amps {
            let outside: usize = (0..self.modes)
                .filter(|m| !keep.contains(m))
                .map(|m| o.0[m] as usize)
                .sum();
            if outside != 0 {
                return None;
            }
            s.add_amplitude(o.select(keep), *a);
        }
        Some(s)
    }

    /// Appends `extra` vacuum modes.
    pub fn with_vacuum(&self, extra: usize) -> Self {
        self.tensor(&PureState::vacuum(extra))
    }

    /// The term of largest magnitude (ties broken by basis order).
    pub fn dominant_term(&self) -> Option<(&Occupation, &Complex64)> {
        let mut best: Option<(&Occupation, &Complex64)> = None;
        for (o, a) in &self.amps {
            if best.is_none_or(|(_, b)| a.norm() > b.norm() + 1e-15) {
                best = Some((o, a));
            }
        }
        best
    }

    /// Same state with its global phase chosen so the dominant amplitude is
    /// real and positive.
    pub fn phase_canonical(&self) -> Self {
        match self.dominant_term() {
            Some((_, a)) => {
                let ph = a.conj() / a.norm();
                self.scaled(ph)
            }
            None => self.clone(),
        }
    }

    /// Max absolute amplitude difference.
    pub fn distance_max(&self, other: &PureState) -> Result<f64> {
        check_modes(self, other)?;
        let mut d: f64 = 0.0;
        for (o, a) in &self.amps {
            d = d.max((a - other.amplitude(o)).norm());
        }
        for (o, b) in &other.amps {
            if !self.amps.contains_key(o) {
                d = d.max(b.norm());
            }
        }
        Ok(d)
    }
}

fn check_modes(a: &PureState, b: &PureState) -> Result<()> {
    if a.modes != b.modes {
        return Err(Error::ModeMismatch { left: a.modes, right: b.modes });
    }
    Ok(())
}

pub(crate) fn validate_modes(modes: &[usize], total: usize) -> Result<()> {
    for (i, &m) in modes.iter().enumerate() {
        if m >= total {
            return Err(Error::OutOfRange { index: m, modes: total });
        }
        if modes[..i].contains(&m) {
            return Err(Error::DuplicateModes(modes.to_vec()));
        }
    }
    Ok(())
}

/// `|<a|b>|²` for normalized states.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    for s in [a, b] {
        if !s.is_normalized() {
            return Err(Error::NotNormalized(s.norm_sqr()));
        }
    }
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// Removes every term with two or more photons on any listed mode.
pub fn truncate_to_qubit_subspace(s: &PureState, modes: &[usize]) -> PureState {
    let mut out = s.clone();
    out.amps.retain(|o, _| modes.iter().all(|&m| o.0[m] < 2));
    out
}

/// Ordered disjoint mode pairs; qubit `|0>` is `|10>` and `|1>` is `|01>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualRailPairing {
    pairs: Vec<(usize, usize)>,
}

impl DualRailPairing {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let flat: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        validate_modes(&flat, usize::MAX)?;
        Ok(DualRailPairing { pairs })
    }

    /// Pairs `(0,1), (2,3), ...` for `k` qubits.
    pub fn consecutive(k: usize) -> Self {
        DualRailPairing { pairs: (0..k).map(|i| (2 * i, 2 * i + 1)).collect() }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn qubits(&self) -> usize {
        self.pairs.len()
    }

    fn check_range(&self, modes: usize) -> Result<()> {
        for &(a, b) in &self.pairs {
            for m in [a, b] {
                if m >= modes {
                    return Err(Error::OutOfRange { index: m, modes });
                }
            }
        }
        Ok(())
    }
}

/// Encodes `2^k` qubit amplitudes (first pair is the most significant bit)
/// into a Fock state on `modes` modes; unpaired modes are vacuum.
pub fn encode_dual_rail(
    qubits: &[Complex64],
    pairing: &DualRailPairing,
    modes: usize,
) -> Result<PureState> {
    pairing.check_range(modes)?;
    let k = pairing.qubits();
    if qubits.len() != 1 << k {
        return Err(Error::InvalidParameter(format!(
            "expected {} amplitudes, got {}",
            1 << k,
            qubits.len()
        )));
    }
    let mut s = PureState::zero(modes);
    for (idx, &a) in qubits.iter().enumerate() {
        let mut occ = vec![0u8; modes];
        for (j, &(ma, mb)) in pairing.pairs.iter().enumerate() {
            let bit = (idx >> (k - 1 - j)) & 1;
            if bit == 0 {
                occ[ma] = 1;
            } else {
                occ[mb] = 1;
            }
        }
        s.add_amplitude(Occupation(occ), a);
    }
    s.prune();
    Ok(s)
}

/// Inverse of [`encode_dual_rail`]; fails with `NotAQubitState` when any pair
/// holds a photon count other than one or an unpaired mode is occupied.
pub fn decode_dual_rail(s: &PureState, pairing: &DualRailPairing) -> Result<Vec<Complex64>> {
    pairing.check_range(s.modes())?;
    let k = pairing.qubits();
    let paired: Vec<usize> = pairing.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut out = vec![Complex64::default(); 1 << k];
    for (o, a) in s.terms() {
        if (0..s.modes()).any(|m| !paired.contains(&m) && o.get(m) != 0) {
            return Err(Error::NotAQubitState);
        }
        let mut idx = 0usize;
        for &(ma, mb) in &pairing.pairs {
            idx <<= 1;
            match (o.get(ma), o.get(mb)) {
                (1, 0) => {}
                (0, 1) => idx |= 1,
                _ => return Err(Error::NotAQubitState),
            }
        }
        out[idx] += a;
    }
    Ok(out)
}

/// Sign of the two terms of a primate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Named states on their conventional mode layouts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reference {
    PhiMinus,
    PsiMinus,
    ChiMinus,
    ChiPlus,
    W42,
    Ghz(usize),
    SingleRailBell,
    Primate { n: usize, lambda: f64, sign: Sign },
}

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn reference_state(r: Reference) -> Result<PureState> {
    Ok(match r {
        Reference::PhiMinus => PureState::from_real(4, &[(&[0, 1, 0, 1], H), (&[1, 0, 1, 0], -H)]),
        Reference::PsiMinus => PureState::from_real(4, &[(&[0, 1, 1, 0], H), (&[1, 0, 0, 1], -H)]),
        Reference::ChiMinus => PureState::from_real(4, &[(&[1, 1, 0, 0], H), (&[0, 0, 1, 1], -H)]),
        Reference::ChiPlus => PureState::from_real(4, &[(&[1, 1, 0, 0], H), (&[0, 0, 1, 1], H)]),
        Reference::W42 => {
            let c = 6f64.powf(-0.5);
            let terms: Vec<(Occupation, Complex64)> = occupations(4, 2)
                .into_iter()
                .filter(|o| o.counts().iter().all(|&x| x < 2))
                .map(|o| (o, Complex64::new(c, 0.0)))
                .collect();
            PureState::from_terms(4, terms)?
        }
        Reference::Ghz(n) => {
            if n < 1 {
                return Err(Error::InvalidParameter("GHZ size must be at least 1".into()));
            }
            let mut q = vec![Complex64::default(); 1 << n];
            q[0] = Complex64::new(H, 0.0);
            q[(1 << n) - 1] = Complex64::new(H, 0.0);
            encode_dual_rail(&q, &DualRailPairing::consecutive(n), 2 * n)?
        }
        Reference::SingleRailBell => PureState::from_real(2, &[(&[1, 0], H), (&[0, 1], H)]),
        Reference::Primate { n, lambda, sign } => primate(n, lambda, sign)?,
    })
}

/// `sqrt(λ)(|2>|01>^(n-1)|0> ± |0>|10>^(n-1)|2>)/sqrt2 + sqrt(1-λ)|0>|vac>|0>`.
fn primate(n: usize, lambda: f64, sign: Sign) -> Result<PureState> {
    if n < 1 {
        return Err(Error::InvalidParameter("primate size must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!("lambda {lambda} outside [0,1]")));
    }
    let m = 2 * n;
    let mut left = vec![0u8; m];
    let mut right = vec![0u8; m];
    left[0] = 2;
    right[m - 1] = 2;
    for p in 0..n - 1 {
        left[2 + 2 * p] = 1;
        right[1 + 2 * p] = 1;
    }
    let a = (lambda / 2.0).sqrt();
    let terms = vec![
        (Occupation(left), Complex64::new(a, 0.0)),
        (Occupation(right), Complex64::new(sign.value() * a, 0.0)),
        (Occupation::vacuum(m), Complex64::new((1.0 - lambda).sqrt(), 0.0)),
    ];
    PureState::from_terms(m, terms)
}
