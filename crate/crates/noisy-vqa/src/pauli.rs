//! Pauli-basis algebra: strings, observables, and the fast transform.
//!
//! Conventions used across the crate:
//!
//! * Qubit 0 is the least-significant bit of a basis index. In text form a
//!   string reads left-to-right from the highest qubit down, so the
//!   *rightmost* character acts on qubit 0 (`"XZ"` is X on qubit 1, Z on
//!   qubit 0).
//! * Every n-qubit Pauli string has a code in `0..4^n`: base-4 digits, one
//!   per qubit (I=0, X=1, Y=2, Z=3), qubit k at the `4^k` place. Codes index
//!   the flat coefficient vectors used by the cost functions.
//! * Observable coefficients are normalized as `w_i = Tr(O σ_i) / 2^n`, so
//!   `O = Σ_i w_i σ_i`. State coefficient vectors elsewhere use the
//!   unnormalized `a_i = Tr(ρ σ_i)`; with those two choices
//!   `Tr(ρ O) = w_0 + Σ_{i≠0} a_i w_i`.
//!
//! The dense-to-Pauli transform is a radix-4 butterfly over interleaved
//! (row, column) bits, `O(n·4^n)` instead of the naive `O(16^n)`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

/// Largest qubit count for dense `4^n`-sized transforms (decompose,
/// coefficient vectors).
pub const MAX_TRANSFORM_QUBITS: usize = 10;
/// Largest qubit count for materializing a dense `2^n × 2^n` matrix.
pub const MAX_MATERIALIZE_QUBITS: usize = 12;
/// Coefficients at or below this magnitude are dropped when building
/// observables.
pub const COEFF_PRUNE: f64 = 1e-12;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    /// Base-4 digit of this letter in a string code.
    pub fn digit(self) -> usize {
        match self {
            PauliLetter::I => 0,
            PauliLetter::X => 1,
            PauliLetter::Y => 2,
            PauliLetter::Z => 3,
        }
    }

    pub fn from_digit(d: usize) -> Self {
        match d {
            0 => PauliLetter::I,
            1 => PauliLetter::X,
            2 => PauliLetter::Y,
            3 => PauliLetter::Z,
            _ => panic!("Pauli digit must be 0..4, got {d}"),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }
}

/// Multi-qubit Pauli string. `letters[k]` acts on qubit k.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>) -> Self {
        PauliString { letters }
    }

    pub fn identity(n: usize) -> Self {
        PauliString { letters: vec![PauliLetter::I; n] }
    }

    /// Parse from text, rightmost character = qubit 0.
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        if s.is_empty() {
            return Err("empty Pauli string".into());
        }
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars().rev() {
            match PauliLetter::from_char(c) {
                Some(l) => letters.push(l),
                None => return Err(format!("invalid Pauli letter `{c}` in `{s}`")),
            }
        }
        Ok(PauliString { letters })
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letter(&self, qubit: usize) -> PauliLetter {
        self.letters[qubit]
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&l| l == PauliLetter::I)
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&l| l != PauliLetter::I).count()
    }

    /// Base-4 code, qubit k at the `4^k` place.
    pub fn code(&self) -> usize {
        let mut code = 0usize;
        for (k, l) in self.letters.iter().enumerate() {
            code += l.digit() << (2 * k);
        }
        code
    }

    pub fn from_code(n: usize, code: usize) -> Self {
        let letters = (0..n)
            .map(|k| PauliLetter::from_digit((code >> (2 * k)) & 0b11))
            .collect();
        PauliString { letters }
    }

    /// Bitmask of qubits carrying X or Y (the bit-flipping letters).
    pub fn x_mask(&self) -> usize {
        let mut m = 0usize;
        for (k, l) in self.letters.iter().enumerate() {
            if matches!(l, PauliLetter::X | PauliLetter::Y) {
                m |= 1 << k;
            }
        }
        m
    }

    /// Matrix element `σ[col ^ x_mask, col]` — the only nonzero entry in
    /// column `col`.
    pub fn column_factor(&self, col: usize) -> Complex64 {
        let mut f = Complex64::new(1.0, 0.0);
        for (k, l) in self.letters.iter().enumerate() {
            let bit = (col >> k) & 1 == 1;
            match l {
                PauliLetter::I | PauliLetter::X => {}
                PauliLetter::Y => {
                    f *= if bit { Complex64::new(0.0, -1.0) } else { Complex64::new(0.0, 1.0) }
                }
                PauliLetter::Z => {
                    if bit {
                        f = -f;
                    }
                }
            }
        }
        f
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters.iter().rev() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Real linear combination of Pauli strings (a Hermitian observable).
///
/// Terms are keyed by string code, so iteration and text output are in a
/// fixed, reproducible order.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliObservable {
    n: usize,
    terms: BTreeMap<usize, f64>,
}

impl PauliObservable {
    /// Build from (string, coefficient) pairs; repeated strings merge, and
    /// coefficients below [`COEFF_PRUNE`] are dropped.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, f64)>,
    {
        let mut map: BTreeMap<usize, f64> = BTreeMap::new();
        for (s, c) in terms {
            if s.n() != n {
                return Err(Error::InvalidInstance(format!(
                    "Pauli string {s} has {} qubits, observable has {n}",
                    s.n()
                )));
            }
            *map.entry(s.code()).or_insert(0.0) += c;
        }
        map.retain(|_, c| c.abs() > COEFF_PRUNE);
        Ok(PauliObservable { n, terms: map })
    }

    pub fn zero(n: usize) -> Self {
        PauliObservable { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored (nonzero) terms — the observable's Pauli rank.
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    /// Iterate terms in code order.
    pub fn terms(&self) -> impl Iterator<Item = (PauliString, f64)> + '_ {
        self.terms.iter().map(|(&code, &c)| (PauliString::from_code(self.n, code), c))
    }

    pub fn coefficient(&self, s: &PauliString) -> f64 {
        self.terms.get(&s.code()).copied().unwrap_or(0.0)
    }

    /// Coefficient of the identity string: `Tr(O) / 2^n`.
    pub fn identity_coefficient(&self) -> f64 {
        self.terms.get(&0).copied().unwrap_or(0.0)
    }

    /// Copy with the identity term removed.
    pub fn traceless(&self) -> Self {
        let mut t = self.clone();
        t.terms.remove(&0);
        t
    }

    /// Copy with `delta` added to the identity coefficient (`O + delta·I`).
    pub fn shifted(&self, delta: f64) -> Self {
        let mut t = self.clone();
        let c = t.terms.entry(0).or_insert(0.0);
        *c += delta;
        if c.abs() <= COEFF_PRUNE {
            t.terms.remove(&0);
        }
        t
    }

    /// Sum with another observable on the same qubit count.
    pub fn add(&self, other: &PauliObservable) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
                n: self.n,
            });
        }
        let mut terms = self.terms.clone();
        for (&code, &c) in &other.terms {
            *terms.entry(code).or_insert(0.0) += c;
        }
        terms.retain(|_, c| c.abs() > COEFF_PRUNE);
        Ok(PauliObservable { n: self.n, terms })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut terms = self.terms.clone();
        terms.retain(|_, c| {
            *c *= factor;
            c.abs() > COEFF_PRUNE
        });
        PauliObservable { n: self.n, terms }
    }

    /// Full coefficient vector of length `4^n`, indexed by string code
    /// (identity at index 0).
    pub fn coefficient_vector(&self) -> Result<Vec<f64>> {
        if self.n > MAX_TRANSFORM_QUBITS {
            return Err(Error::DimensionOverflow {
                qubits: self.n,
                operation: "coefficient vector".into(),
                max: MAX_TRANSFORM_QUBITS,
            });
        }
        let mut w = vec![0.0; 1 << (2 * self.n)];
        for (&code, &c) in &self.terms {
            w[code] = c;
        }
        Ok(w)
    }

    /// 2-norm of the non-identity coefficients.
    pub fn traceless_norm2(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(&code, _)| code != 0)
            .map(|(_, c)| c * c)
            .sum::<f64>()
            .sqrt()
    }

    /// Decompose a dense Hermitian matrix into Pauli coefficients.
    ///
    /// Rejects non-Hermitian input; the transform itself is the radix-4
    /// butterfly in [`pauli_transform`].
    pub fn decompose(n: usize, dense: &[Complex64]) -> Result<Self> {
        let dim = 1usize << n;
        if dense.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: dense.len(), n });
        }
        let deviation = linalg::hermiticity_deviation(dim, dense);
        if deviation > linalg::HERMITICITY_TOL {
            return Err(Error::NonHermitian { deviation });
        }
        let coeffs = pauli_transform(n, dense)?;
        let mut terms = BTreeMap::new();
        for (code, z) in coeffs.iter().enumerate() {
            debug_assert!(z.im.abs() < 1e-9, "Hermitian input must give real coefficients");
            if z.re.abs() > COEFF_PRUNE {
                terms.insert(code, z.re);
            }
        }
        Ok(PauliObservable { n, terms })
    }

    /// Decompose a diagonal (computational-basis) operator.
    ///
    /// Only I/Z strings can appear, so this is a Walsh–Hadamard transform
    /// over `2^n` values instead of the full `4^n` butterfly — no qubit cap.
    pub fn decompose_diagonal(n: usize, diag: &[f64]) -> Result<Self> {
        let dim = 1usize << n;
        if diag.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: diag.len(), n });
        }
        let mut t = diag.to_vec();
        for k in 0..n {
            let s = 1usize << k;
            let mut base = 0;
            while base < dim {
                for j in base..base + s {
                    let b0 = t[j];
                    let b1 = t[j + s];
                    t[j] = (b0 + b1) * 0.5;
                    t[j + s] = (b0 - b1) * 0.5;
                }
                base += s * 2;
            }
        }
        // Index bit k set means letter Z on qubit k; map to base-4 codes.
        let mut terms = BTreeMap::new();
        for (mask, &c) in t.iter().enumerate() {
            if c.abs() > COEFF_PRUNE {
                let mut code = 0usize;
                for k in 0..n {
                    if (mask >> k) & 1 == 1 {
                        code += 3 << (2 * k);
                    }
                }
                terms.insert(code, c);
            }
        }
        Ok(PauliObservable { n, terms })
    }

    /// True if every term is an I/Z string (diagonal in the computational
    /// basis).
    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|&code| {
            (0..self.n).all(|k| {
                let d = (code >> (2 * k)) & 0b11;
                d == 0 || d == 3
            })
        })
    }

    /// Diagonal of the matrix, `O(rank · 2^n)`. Exact when
    /// [`is_diagonal`](Self::is_diagonal); otherwise it is the diagonal part
    /// only (X/Y-carrying terms contribute nothing on the diagonal).
    pub fn diagonal(&self) -> Vec<f64> {
        let dim = 1usize << self.n;
        let mut d = vec![0.0; dim];
        for (&code, &c) in &self.terms {
            let s = PauliString::from_code(self.n, code);
            if s.x_mask() != 0 {
                continue;
            }
            for (idx, slot) in d.iter_mut().enumerate() {
                *slot += c * s.column_factor(idx).re;
            }
        }
        d
    }

    /// Dense `2^n × 2^n` row-major matrix, `O(rank · 2^n)` scatter.
    pub fn materialize(&self) -> Result<Vec<Complex64>> {
        if self.n > MAX_MATERIALIZE_QUBITS {
            return Err(Error::DimensionOverflow {
                qubits: self.n,
                operation: "materializing a dense matrix".into(),
                max: MAX_MATERIALIZE_QUBITS,
            });
        }
        let dim = 1usize << self.n;
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (&code, &c) in &self.terms {
            let s = PauliString::from_code(self.n, code);
            let xmask = s.x_mask();
            for col in 0..dim {
                let row = col ^ xmask;
                m[row * dim + col] += c * s.column_factor(col);
            }
        }
        Ok(m)
    }

    /// Single matrix entry `O[row, col]`, `O(rank)` — used to build
    /// subspace-restricted blocks without materializing everything.
    pub fn matrix_entry(&self, row: usize, col: usize) -> Complex64 {
        let mut e = Complex64::new(0.0, 0.0);
        for (&code, &c) in &self.terms {
            let s = PauliString::from_code(self.n, code);
            if col ^ s.x_mask() == row {
                e += c * s.column_factor(col);
            }
        }
        e
    }

    /// `Tr(ρ O)` against a row-major density matrix, `O(rank · 2^n)`.
    pub fn expectation(&self, rho: &[Complex64]) -> f64 {
        let dim = 1usize << self.n;
        debug_assert_eq!(rho.len(), dim * dim);
        let mut total = Complex64::new(0.0, 0.0);
        for (&code, &c) in &self.terms {
            let s = PauliString::from_code(self.n, code);
            let xmask = s.x_mask();
            let mut term = Complex64::new(0.0, 0.0);
            for col in 0..dim {
                // Tr(ρ σ) = Σ_col ρ[col, col ^ xmask] · σ[col ^ xmask, col]
                term += rho[col * dim + (col ^ xmask)] * s.column_factor(col);
            }
            total += c * term;
        }
        debug_assert!(total.im.abs() < 1e-8, "expectation of Hermitian pair must be real");
        total.re
    }
}

/// Interleave the bits of `0..2^n`: bit k of the input lands at bit 2k.
fn spread_table(n: usize) -> Vec<usize> {
    let mut t = vec![0usize; 1 << n];
    for i in 1..t.len() {
        t[i] = (t[i >> 1] << 2) | (i & 1);
    }
    t
}

/// Full Pauli transform of a dense row-major matrix: returns
/// `Tr(H σ_code) / 2^n` for every code in `0..4^n`.
///
/// Entries are first scattered so each qubit's (row, column) bit pair forms
/// one base-4 digit, then a per-qubit butterfly maps the matrix-unit basis
/// `(m00, m01, m10, m11)` to Pauli coordinates
/// `((m00+m11)/2, (m01+m10)/2, i(m01−m10)/2, (m00−m11)/2)`.
pub fn pauli_transform(n: usize, dense: &[Complex64]) -> Result<Vec<Complex64>> {
    if n > MAX_TRANSFORM_QUBITS {
        return Err(Error::DimensionOverflow {
            qubits: n,
            operation: "Pauli transform".into(),
            max: MAX_TRANSFORM_QUBITS,
        });
    }
    let dim = 1usize << n;
    if dense.len() != dim * dim {
        return Err(Error::DimensionMismatch { expected: dim * dim, got: dense.len(), n });
    }
    let spread = spread_table(n);
    let mut t = vec![Complex64::new(0.0, 0.0); 1 << (2 * n)];
    for row in 0..dim {
        for col in 0..dim {
            t[spread[col] | (spread[row] << 1)] = dense[row * dim + col];
        }
    }
    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, 0.5);
    for k in 0..n {
        let s = 1usize << (2 * k);
        let group = s * 4;
        let mut base = 0;
        while base < t.len() {
            for j in base..base + s {
                let b0 = t[j];
                let b1 = t[j + s];
                let b2 = t[j + 2 * s];
                let b3 = t[j + 3 * s];
                t[j] = (b0 + b3) * half;
                t[j + s] = (b1 + b2) * half;
                t[j + 2 * s] = (b1 - b2) * half_i;
                t[j + 3 * s] = (b0 - b3) * half;
            }
            base += group;
        }
    }
    Ok(t)
}

/// A parsed Pauli-text file: the observable plus any `key=value` metadata
/// found on `#` lines.
#[derive(Debug, Clone)]
pub struct PauliTextFile {
    pub observable: PauliObservable,
    pub metadata: BTreeMap<String, String>,
}

/// Parse the Pauli-text format.
///
/// One term per line as `<coefficient> <letters>`; blank lines are skipped;
/// `#` starts a comment, and `key=value` tokens inside comments are
/// collected as metadata (e.g. `# ground_energy=-1.85 electrons=2`). All
/// terms must agree on qubit count.
pub fn parse_pauli_text(text: &str) -> Result<PauliTextFile> {
    let mut metadata = BTreeMap::new();
    let mut terms: Vec<(PauliString, f64)> = Vec::new();
    let mut n: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            for token in comment.split_whitespace() {
                if let Some((k, v)) = token.split_once('=') {
                    if !k.is_empty() {
                        metadata.insert(k.to_string(), v.to_string());
                    }
                }
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let coeff_str = parts.next().unwrap();
        let letters = parts.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected `<coefficient> <letters>`, got `{line}`"),
        })?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("trailing content after Pauli string in `{line}`"),
            });
        }
        let coeff: f64 = coeff_str.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("invalid coefficient `{coeff_str}`"),
        })?;
        let string = PauliString::parse(letters)
            .map_err(|message| Error::Parse { line: line_no, message })?;
        match n {
            None => n = Some(string.n()),
            Some(expected) if expected != string.n() => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!(
                        "string `{letters}` has {} qubits, earlier terms have {expected}",
                        string.n()
                    ),
                });
            }
            _ => {}
        }
        terms.push((string, coeff));
    }
    let n = n.ok_or_else(|| Error::Parse {
        line: text.lines().count().max(1),
        message: "no Pauli terms found".into(),
    })?;
    Ok(PauliTextFile { observable: PauliObservable::from_terms(n, terms)?, metadata })
}

/// Serialize an observable in the Pauli-text format. Metadata pairs, if
/// given, become a single leading `# key=value ...` line in the order
/// provided.
pub fn write_pauli_text(obs: &PauliObservable, metadata: &[(&str, String)]) -> String {
    let mut out = String::new();
    if !metadata.is_empty() {
        out.push('#');
        for (k, v) in metadata {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
    }
    for (s, c) in obs.terms() {
        out.push_str(&format!("{c} {s}\n"));
    }
    out
}
