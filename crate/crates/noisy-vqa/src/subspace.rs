//! Promised solution subspaces: spans of computational-basis states.
//!
//! A subspace is described in configs by a small predicate grammar over
//! basis indices, intersected with `&`:
//!
//! ```text
//! all                       every basis state
//! fixed_bit(b, v)           qubit b reads v ∈ {0, 1}
//! fixed_bits(mask, val)     all qubits in mask read the matching bit of val
//! hamming_weight(k)         exactly k ones
//! ```
//!
//! e.g. `fixed_bit(2, 0) & hamming_weight(2)`. Integers accept `0b`/`0x`
//! prefixes. The parsed form is just the sorted list of member indices plus
//! an O(1) membership table.

use crate::error::{Error, Result};
use crate::pauli::PauliObservable;

/// Span of a set of computational-basis states of an n-qubit register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    n: usize,
    indices: Vec<usize>,
    member: Vec<bool>,
    description: String,
}

impl Subspace {
    /// Full space.
    pub fn all(n: usize) -> Self {
        Self::build(n, (0..1usize << n).collect(), "all".into()).unwrap()
    }

    /// Basis states where qubit `bit` reads `value`.
    pub fn fixed_bit(n: usize, bit: usize, value: u8) -> Result<Self> {
        if bit >= n {
            return Err(Error::Config(format!("fixed_bit({bit}, _): qubit out of range for n = {n}")));
        }
        if value > 1 {
            return Err(Error::Config(format!("fixed_bit(_, {value}): value must be 0 or 1")));
        }
        let indices = (0..1usize << n)
            .filter(|i| ((i >> bit) & 1) as u8 == value)
            .collect();
        Self::build(n, indices, format!("fixed_bit({bit}, {value})"))
    }

    /// Basis states agreeing with `value` on every qubit in `mask`.
    pub fn fixed_bits(n: usize, mask: usize, value: usize) -> Result<Self> {
        if mask >= 1usize << n {
            return Err(Error::Config(format!("fixed_bits: mask {mask:#b} exceeds {n} qubits")));
        }
        if value & !mask != 0 {
            return Err(Error::Config(format!(
                "fixed_bits: value {value:#b} sets bits outside mask {mask:#b}"
            )));
        }
        let indices = (0..1usize << n).filter(|i| i & mask == value).collect();
        Self::build(n, indices, format!("fixed_bits({mask:#b}, {value:#b})"))
    }

    /// Basis states with exactly `k` ones.
    pub fn hamming_weight(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::Config(format!("hamming_weight({k}) impossible on {n} qubits")));
        }
        let indices = (0..1usize << n).filter(|i| i.count_ones() as usize == k).collect();
        Self::build(n, indices, format!("hamming_weight({k})"))
    }

    /// Explicit index list (sorted and deduplicated internally).
    pub fn from_indices(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        let dim = 1usize << n;
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::Config(format!("subspace index {bad} out of range for n = {n}")));
        }
        indices.sort_unstable();
        indices.dedup();
        let desc = format!("indices({})", indices.len());
        Self::build(n, indices, desc)
    }

    /// Parse the predicate grammar (see module docs).
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut acc: Option<Subspace> = None;
        for part in text.split('&') {
            let s = parse_atom(n, part.trim())?;
            acc = Some(match acc {
                None => s,
                Some(prev) => prev.intersect(&s)?,
            });
        }
        let mut result =
            acc.ok_or_else(|| Error::Config("empty subspace expression".into()))?;
        result.description = text.split('&').map(str::trim).collect::<Vec<_>>().join(" & ");
        if result.indices.is_empty() {
            return Err(Error::EmptySubspace(result.description));
        }
        Ok(result)
    }

    /// Intersection with another subspace of the same register.
    pub fn intersect(&self, other: &Subspace) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n, n: self.n });
        }
        let indices: Vec<usize> =
            self.indices.iter().copied().filter(|&i| other.member[i]).collect();
        let description = format!("{} & {}", self.description, other.description);
        if indices.is_empty() {
            return Err(Error::EmptySubspace(description));
        }
        Self::build(self.n, indices, description)
    }

    fn build(n: usize, indices: Vec<usize>, description: String) -> Result<Self> {
        let mut member = vec![false; 1usize << n];
        for &i in &indices {
            member[i] = true;
        }
        Ok(Subspace { n, indices, member, description })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of member basis states, |S|.
    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, index: usize) -> bool {
        self.member.get(index).copied().unwrap_or(false)
    }

    /// Position of `index` within the sorted member list, if present.
    pub fn position(&self, index: usize) -> Option<usize> {
        self.indices.binary_search(&index).ok()
    }

    /// The canonical predicate text this subspace was built from.
    pub fn describe(&self) -> &str {
        &self.description
    }

    /// Indicator diagonal: 1.0 on members, 0.0 elsewhere.
    pub fn projector_diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; 1usize << self.n];
        for &i in &self.indices {
            d[i] = 1.0;
        }
        d
    }

    /// The projector Π_S as a Pauli observable (I/Z strings only).
    pub fn projector_observable(&self) -> Result<PauliObservable> {
        PauliObservable::decompose_diagonal(self.n, &self.projector_diagonal())
    }
}

fn parse_atom(n: usize, text: &str) -> Result<Subspace> {
    if text == "all" {
        return Ok(Subspace::all(n));
    }
    let (name, rest) = text
        .split_once('(')
        .ok_or_else(|| Error::Config(format!("cannot parse subspace predicate `{text}`")))?;
    let args = rest
        .strip_suffix(')')
        .ok_or_else(|| Error::Config(format!("missing `)` in subspace predicate `{text}`")))?;
    let ints: Vec<usize> = args
        .split(',')
        .map(|a| parse_int(a.trim()))
        .collect::<Result<_>>()
        .map_err(|_| Error::Config(format!("invalid integer arguments in `{text}`")))?;
    match (name.trim(), ints.as_slice()) {
        ("fixed_bit", [bit, value]) => {
            if *value > 1 {
                return Err(Error::Config(format!("fixed_bit value must be 0 or 1 in `{text}`")));
            }
            Subspace::fixed_bit(n, *bit, *value as u8)
        }
        ("fixed_bits", [mask, value]) => Subspace::fixed_bits(n, *mask, *value),
        ("hamming_weight", [k]) => Subspace::hamming_weight(n, *k),
        _ => Err(Error::Config(format!(
            "unknown subspace predicate `{text}` (expected all, fixed_bit(b,v), fixed_bits(mask,val), or hamming_weight(k))"
        ))),
    }
}

fn parse_int(s: &str) -> Result<usize> {
    let parsed = if let Some(hex) = s.strip_prefix("0x") {
        usize::from_str_radix(hex, 16)
    } else if let Some(bin) = s.strip_prefix("0b") {
        usize::from_str_radix(bin, 2)
    } else {
        s.parse()
    };
    parsed.map_err(|_| Error::Config(format!("invalid integer `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_select_expected_indices() {
        let s = Subspace::fixed_bit(4, 2, 0).unwrap();
        assert_eq!(s.size(), 8);
        assert!(s.indices().iter().all(|i| (i >> 2) & 1 == 0));
        assert!(s.contains(0b1011));
        assert!(!s.contains(0b0100));

        let s = Subspace::hamming_weight(4, 2).unwrap();
        assert_eq!(s.size(), 6);
        assert_eq!(s.indices(), &[0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);

        let s = Subspace::fixed_bits(6, 0b11, 0).unwrap();
        assert_eq!(s.size(), 16);
        assert!(s.indices().iter().all(|i| i & 0b11 == 0));

        assert_eq!(Subspace::all(3).size(), 8);
    }

    #[test]
    fn parse_grammar_with_intersection() {
        let s = Subspace::parse(4, "fixed_bit(2, 0) & hamming_weight(2)").unwrap();
        assert_eq!(s.indices(), &[0b0011, 0b1001, 0b1010]);
        assert_eq!(s.describe(), "fixed_bit(2, 0) & hamming_weight(2)");

        let s = Subspace::parse(6, "fixed_bits(0b11, 0b0)").unwrap();
        assert_eq!(s.size(), 16);

        let s = Subspace::parse(4, "all").unwrap();
        assert_eq!(s.size(), 16);

        let s = Subspace::parse(4, "fixed_bits(0x3, 0x1)").unwrap();
        assert!(s.indices().iter().all(|i| i & 0b11 == 0b01));
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(Subspace::parse(4, "nonsense"), Err(Error::Config(_))));
        assert!(matches!(Subspace::parse(4, "fixed_bit(9, 0)"), Err(Error::Config(_))));
        assert!(matches!(Subspace::parse(4, "fixed_bit(1, 2)"), Err(Error::Config(_))));
        assert!(matches!(Subspace::parse(4, "fixed_bits(0b11, 0b100)"), Err(Error::Config(_))));
        assert!(matches!(Subspace::parse(4, "hamming_weight(5)"), Err(Error::Config(_))));
        assert!(matches!(Subspace::parse(4, "fixed_bit(1)"), Err(Error::Config(_))));
        // Contradictory intersection leaves nothing.
        assert!(matches!(
            Subspace::parse(4, "fixed_bit(0, 0) & fixed_bit(0, 1)"),
            Err(Error::EmptySubspace(_))
        ));
    }

    #[test]
    fn membership_and_positions() {
        let s = Subspace::parse(4, "hamming_weight(2)").unwrap();
        assert_eq!(s.position(0b0101), Some(1));
        assert_eq!(s.position(0b0111), None);
        let d = s.projector_diagonal();
        assert_eq!(d.iter().filter(|&&x| x == 1.0).count(), 6);
    }

    #[test]
    fn projector_observable_squares_to_itself() {
        let s = Subspace::parse(3, "fixed_bit(0, 1)").unwrap();
        let p = s.projector_observable().unwrap();
        // Π_S = (I - Z_0)/2 for fixed_bit(0, 1).
        assert_eq!(p.rank(), 2);
        let m = p.materialize().unwrap();
        let dim = 8;
        // Idempotent and diagonal with the right pattern.
        for r in 0..dim {
            for c in 0..dim {
                let mut sq = num_complex::Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    sq += m[r * dim + k] * m[k * dim + c];
                }
                assert!((sq - m[r * dim + c]).norm() < 1e-12);
            }
            let expect = if r & 1 == 1 { 1.0 } else { 0.0 };
            assert!((m[r * dim + r].re - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn explicit_indices_sorted_and_checked() {
        let s = Subspace::from_indices(3, vec![5, 1, 5, 3]).unwrap();
        assert_eq!(s.indices(), &[1, 3, 5]);
        assert!(Subspace::from_indices(3, vec![8]).is_err());
    }
}
