//! Pauli strings in the symplectic (X-mask, Z-mask) representation, exact
//! quarter-turn phases, and sparse weighted sums of strings.
//!
//! Qubit 1 is the leftmost letter of a string and the most significant
//! tensor factor of the dense matrix. In the masks, qubit `q` lives at bit
//! `q - 1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::dense::DenseOperator;
use crate::error::{Error, Result};

/// Largest register a string can address.
pub const MAX_PAULI_QUBITS: usize = 64;

/// Default dense-conversion cap (4096 x 4096).
pub const DEFAULT_DENSE_QUBIT_LIMIT: usize = 12;

/// Coefficients with magnitude at or below this are dropped from sums.
pub const DEFAULT_PRUNE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn rank(self) -> u8 {
        self as u8
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Letter {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Letter::I),
            'X' => Ok(Letter::X),
            'Y' => Ok(Letter::Y),
            'Z' => Ok(Letter::Z),
            other => Err(Error::InvalidArgument(format!("not a Pauli letter: {other:?}"))),
        }
    }
}

/// A power of `i`: one of +1, +i, -1, -i. Stored as the exponent mod 4 so
/// products never accumulate floating-point drift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+1", "+i", "-1", "-i"][self.0 as usize])
    }
}

/// A phase-free tensor product of Pauli letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        Ok(Self { n_qubits, x: 0, z: 0 })
    }

    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Result<Self> {
        check_register(n_qubits)?;
        let valid = mask(n_qubits);
        if x & !valid != 0 || z & !valid != 0 {
            return Err(Error::InvalidArgument(format!("mask bits set beyond qubit {n_qubits}")));
        }
        Ok(Self { n_qubits, x, z })
    }

    /// Builds a string with `letter` on each listed 1-based qubit.
    pub fn with_letters(n_qubits: usize, letters: &[(usize, Letter)]) -> Result<Self> {
        let mut s = Self::identity(n_qubits)?;
        for &(qubit, letter) in letters {
            if qubit == 0 || qubit > n_qubits {
                return Err(Error::QubitOutOfRange { qubit, n_qubits });
            }
            s.set(qubit - 1, letter);
        }
        Ok(s)
    }

    fn set(&mut self, index: usize, letter: Letter) {
        let (x, z) = letter.bits();
        let bit = 1u64 << index;
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Letter on the 1-based `qubit`.
    pub fn letter(&self, qubit: usize) -> Letter {
        let bit = 1u64 << (qubit - 1);
        Letter::from_bits(self.x & bit != 0, self.z & bit != 0)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (1..=self.n_qubits).map(|q| self.letter(q))
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Two strings commute iff their symplectic form vanishes.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Product `self * other` as `(phase, string)`.
    ///
    /// Per qubit, XY = iZ, YZ = iX, ZX = iY and the reversed orders pick up
    /// -i, so the phase exponent is popcount(cyclic) - popcount(anticyclic).
    pub fn mul(&self, other: &PauliString) -> Result<(Phase, PauliString)> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitMismatch { left: self.n_qubits, right: other.n_qubits });
        }
        let (ax, ay, az) = self.letter_masks();
        let (bx, by, bz) = other.letter_masks();
        let cyclic = (ax & by) | (ay & bz) | (az & bx);
        let anticyclic = (ay & bx) | (az & by) | (ax & bz);
        let k = cyclic.count_ones() as i64 - anticyclic.count_ones() as i64;
        Ok((Phase::from_exponent(k), PauliString { n_qubits: self.n_qubits, x: self.x ^ other.x, z: self.z ^ other.z }))
    }

    fn letter_masks(&self) -> (u64, u64, u64) {
        (self.x & !self.z, self.x & self.z, !self.x & self.z)
    }

    /// Prepends `letter` as a new qubit 1, shifting the others right.
    pub fn prepend(&self, letter: Letter) -> Result<PauliString> {
        check_register(self.n_qubits + 1)?;
        let mut out = PauliString { n_qubits: self.n_qubits + 1, x: self.x << 1, z: self.z << 1 };
        out.set(0, letter);
        Ok(out)
    }

    /// Dense matrix of the string.
    ///
    /// Column `j` has a single nonzero at row `j ^ flip` with value
    /// `i^(#Y) * (-1)^popcount(zflip & j)`.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        self.to_dense_with_limit(DEFAULT_DENSE_QUBIT_LIMIT)
    }

    pub fn to_dense_with_limit(&self, max_qubits: usize) -> Result<DenseOperator> {
        if self.n_qubits > max_qubits {
            return Err(Error::TooLarge { n_qubits: self.n_qubits, max: max_qubits });
        }
        let dim = 1usize << self.n_qubits;
        let mut out = DenseOperator::zeros(dim, dim);
        self.accumulate_dense(Complex64::new(1.0, 0.0), &mut out);
        Ok(out)
    }

    fn dense_masks(&self) -> (usize, usize) {
        let n = self.n_qubits;
        let mut flip = 0usize;
        let mut sign = 0usize;
        for q in 0..n {
            let bit = 1u64 << q;
            let dense_bit = 1usize << (n - 1 - q);
            if self.x & bit != 0 {
                flip |= dense_bit;
            }
            if self.z & bit != 0 {
                sign |= dense_bit;
            }
        }
        (flip, sign)
    }

    pub(crate) fn accumulate_dense(&self, coeff: Complex64, out: &mut DenseOperator) {
        let (flip, sign) = self.dense_masks();
        let ys = (self.x & self.z).count_ones() as i64;
        let base = coeff * Phase::from_exponent(ys).to_complex();
        for col in 0..out.ncols() {
            let row = col ^ flip;
            let v = if (sign & col).count_ones() % 2 == 0 { base } else { -base };
            out[(row, col)] += v;
        }
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_qubits
            .cmp(&other.n_qubits)
            .then_with(|| self.letters().map(Letter::rank).cmp(other.letters().map(Letter::rank)))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        if n == 0 {
            return Err(Error::InvalidArgument("empty Pauli string".into()));
        }
        let mut out = PauliString::identity(n)?;
        for (i, c) in s.chars().enumerate() {
            out.set(i, Letter::try_from(c)?);
        }
        Ok(out)
    }
}

/// A Pauli string together with an exact quarter-turn phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliTerm {
    pub string: PauliString,
    pub phase: Phase,
}

impl PauliTerm {
    pub fn new(string: PauliString, phase: Phase) -> Self {
        Self { string, phase }
    }

    pub fn parse(letters: &str, phase: Phase) -> Result<Self> {
        Ok(Self { string: letters.parse()?, phase })
    }

    pub fn n_qubits(&self) -> usize {
        self.string.n_qubits
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn is_anti_hermitian(&self) -> bool {
        !self.phase.is_real()
    }

    pub fn mul(&self, other: &PauliTerm) -> Result<PauliTerm> {
        let (phase, string) = self.string.mul(&other.string)?;
        Ok(PauliTerm { string, phase: self.phase * other.phase * phase })
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        let mut m = self.string.to_dense()?;
        m *= self.phase.to_complex();
        Ok(m)
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.phase, self.string)
    }
}

/// Sparse operator `sum_k c_k P_k` over phase-free Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
    prune_tol: f64,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        Ok(Self { n_qubits, terms: BTreeMap::new(), prune_tol: DEFAULT_PRUNE_TOL })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        s.add_term(PauliString::identity(n_qubits)?, Complex64::new(1.0, 0.0))?;
        Ok(s)
    }

    /// Real-weighted sum from `(coefficient, letters)` pairs.
    pub fn from_terms(n_qubits: usize, terms: &[(f64, &str)]) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        for &(c, letters) in terms {
            s.add_term(letters.parse()?, Complex64::new(c, 0.0))?;
        }
        Ok(s)
    }

    /// `coeff * letter_qubit` acting on one qubit of an `n_qubits` register.
    pub fn single(n_qubits: usize, qubit: usize, letter: Letter, coeff: f64) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        s.add_term(PauliString::with_letters(n_qubits, &[(qubit, letter)])?, coeff.into())?;
        Ok(s)
    }

    /// Nearest-neighbour chain `sum_{k=first}^{last-1} (XX + YY + ZZ)_{k,k+1}`.
    /// Empty when `last <= first`.
    pub fn heisenberg_chain(n_qubits: usize, first: usize, last: usize) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        for k in first..last {
            for l in [Letter::X, Letter::Y, Letter::Z] {
                s.add_term(PauliString::with_letters(n_qubits, &[(k, l), (k + 1, l)])?, 1.0.into())?;
            }
        }
        Ok(s)
    }

    pub fn with_prune_tol(mut self, tol: f64) -> Self {
        self.prune_tol = tol;
        self.prune();
        self
    }

    pub fn prune_tol(&self) -> f64 {
        self.prune_tol
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, string: &PauliString) -> Complex64 {
        self.terms.get(string).copied().unwrap_or_default()
    }

    pub fn add_term(&mut self, string: PauliString, coeff: Complex64) -> Result<()> {
        if string.n_qubits != self.n_qubits {
            return Err(Error::QubitMismatch { left: self.n_qubits, right: string.n_qubits });
        }
        let entry = self.terms.entry(string).or_default();
        *entry += coeff;
        if entry.norm() <= self.prune_tol {
            self.terms.remove(&string);
        }
        Ok(())
    }

    fn prune(&mut self) {
        let tol = self.prune_tol;
        self.terms.retain(|_, c| c.norm() > tol);
    }

    fn check_same(&self, other: &PauliSum) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitMismatch { left: self.n_qubits, right: other.n_qubits });
        }
        Ok(())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(*s, *c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.prune();
        out
    }

    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for (sa, ca) in &self.terms {
            for (sb, cb) in &other.terms {
                let (phase, s) = sa.mul(sb)?;
                *acc.entry(s).or_default() += ca * cb * phase.to_complex();
            }
        }
        let mut out = PauliSum { n_qubits: self.n_qubits, terms: acc, prune_tol: self.prune_tol };
        out.prune();
        Ok(out)
    }

    /// `[self, other] = self*other - other*self`.
    ///
    /// Only anticommuting string pairs contribute, each with `2 * c_a c_b * phase`.
    pub fn commutator(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for (sa, ca) in &self.terms {
            for (sb, cb) in &other.terms {
                if sa.commutes_with(sb) {
                    continue;
                }
                let (phase, s) = sa.mul(sb)?;
                *acc.entry(s).or_default() += 2.0 * ca * cb * phase.to_complex();
            }
        }
        let mut out = PauliSum { n_qubits: self.n_qubits, terms: acc, prune_tol: self.prune_tol };
        out.prune();
        Ok(out)
    }

    /// Hermitian iff every stored coefficient is real (up to the prune threshold).
    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() <= self.prune_tol)
    }

    /// New sum on `n + 1` qubits with `letter` on the new leading qubit.
    pub fn prepend(&self, letter: Letter) -> Result<PauliSum> {
        let mut out = PauliSum::zero(self.n_qubits + 1)?.with_prune_tol(self.prune_tol);
        for (s, c) in &self.terms {
            out.add_term(s.prepend(letter)?, *c)?;
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        self.to_dense_with_limit(DEFAULT_DENSE_QUBIT_LIMIT)
    }

    pub fn to_dense_with_limit(&self, max_qubits: usize) -> Result<DenseOperator> {
        if self.n_qubits > max_qubits {
            return Err(Error::TooLarge { n_qubits: self.n_qubits, max: max_qubits });
        }
        let dim = 1usize << self.n_qubits;
        let mut out = DenseOperator::zeros(dim, dim);
        for (s, c) in &self.terms {
            s.accumulate_dense(*c, &mut out);
        }
        Ok(out)
    }

    /// Serializes to the line-oriented text format:
    ///
    /// ```text
    /// qubits: 2
    /// 1 XX
    /// -0.5 ZI
    /// ```
    ///
    /// Coefficients use the shortest round-tripping decimal, so
    /// `parse(write(op)) == op` bit for bit. Fails on complex coefficients.
    pub fn to_text(&self) -> Result<String> {
        let mut out = format!("qubits: {}\n", self.n_qubits);
        for (s, c) in &self.terms {
            if c.im != 0.0 {
                return Err(Error::InvalidArgument(format!("term {s} has a non-real coefficient {c}")));
            }
            out.push_str(&format!("{} {}\n", c.re, s));
        }
        Ok(out)
    }

    /// Parses the text format written by [`PauliSum::to_text`]. `#` starts a
    /// comment; the first non-comment line must be `qubits: <n>`.
    pub fn parse_text(text: &str) -> Result<PauliSum> {
        let mut sum: Option<PauliSum> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            let Some(acc) = sum.as_mut() else {
                let rest = line
                    .strip_prefix("qubits:")
                    .ok_or_else(|| parse_err(format!("expected `qubits: <n>` header, found {line:?}")))?;
                let n: usize =
                    rest.trim().parse().map_err(|_| parse_err(format!("invalid qubit count {:?}", rest.trim())))?;
                if n == 0 || n > MAX_PAULI_QUBITS {
                    return Err(parse_err(format!("qubit count must be in 1..={MAX_PAULI_QUBITS}")));
                }
                sum = Some(PauliSum::zero(n)?);
                continue;
            };
            let mut fields = line.split_whitespace();
            let (Some(coeff), Some(letters), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(parse_err(format!("expected `<coefficient> <letters>`, found {line:?}")));
            };
            let coeff: f64 =
                coeff.parse().map_err(|_| parse_err(format!("coefficient {coeff:?} is not a real decimal number")))?;
            if !coeff.is_finite() {
                return Err(parse_err(format!("coefficient {coeff} is not finite")));
            }
            let n_letters = letters.chars().count();
            if n_letters != acc.n_qubits {
                return Err(parse_err(format!(
                    "string {letters:?} has {n_letters} letters but the header declares {} qubits",
                    acc.n_qubits
                )));
            }
            let string: PauliString = letters.parse().map_err(|e: Error| parse_err(e.to_string()))?;
            acc.add_term(string, coeff.into())?;
        }
        sum.ok_or_else(|| Error::Parse { line: 0, message: "missing `qubits: <n>` header".into() })
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}*{}", c.re, s)?;
            } else {
                write!(f, "({})*{}", c, s)?;
            }
        }
        Ok(())
    }
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_PAULI_QUBITS {
        return Err(Error::InvalidArgument(format!("register size must be in 1..={MAX_PAULI_QUBITS}, got {n_qubits}")));
    }
    Ok(())
}

fn mask(n_qubits: usize) -> u64 {
    if n_qubits >= 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}
