//! Finite idempotent ordered monoids on a chain.
//!
//! An algebra is stored as an `n x n` multiplication table over the ranks
//! `0..n`, where rank order is the chain order (`0` is the bottom) and one
//! rank is the monoid unit. Validation enforces, in this order: identity,
//! associativity, idempotency, monotonicity of the product in both
//! arguments, and the law `a*b ∈ {a, b}` (which the other axioms imply on a
//! chain, but is cheap to state and gives better witnesses).

use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Violations reported by [`FinOrdMonoid::new`], each carrying the first
/// witness found in a fixed scan order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("carrier must be nonempty")]
    EmptyCarrier,
    #[error("unit rank {0} out of range")]
    UnitOutOfRange(usize),
    #[error("table entry at ({row}, {col}) is {value}, out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("unit law fails at {0}")]
    NoIdentity(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("idempotency fails at {0}")]
    NotIdempotent(usize),
    #[error("monotonicity fails at ({0}, {1}) multiplied with {2}")]
    NotMonotone(usize, usize, usize),
    #[error("product of ({0}, {1}) is neither argument")]
    ChoiceViolation(usize, usize),
}

/// Errors from reading the text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseAlgebraError {
    #[error("line {0}: {1}")]
    Malformed(usize, String),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// Which of the four top/bottom product patterns a nontrivial algebra shows.
///
/// Exactly one case holds: the bottom is absorbing, the top is absorbing,
/// both extremes are left-absorbing, or both are right-absorbing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopBottomCase {
    BottomAbsorbing,
    TopAbsorbing,
    LeftAbsorbing,
    RightAbsorbing,
}

/// Summary returned by [`FinOrdMonoid::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub commutative: bool,
    /// `None` exactly for the trivial algebra.
    pub top_bottom_case: Option<TopBottomCase>,
}

/// A finite idempotent ordered monoid whose carrier is the chain `0 < 1 < … < n-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinOrdMonoid {
    size: usize,
    unit: usize,
    /// Row-major: `table[a * size + b]` is the product `a * b`.
    table: Vec<usize>,
}

impl FinOrdMonoid {
    /// Validates a multiplication table and wraps it. Reports the first
    /// violated axiom with a witness; the scan order is fixed so witnesses
    /// are deterministic.
    pub fn new(size: usize, unit: usize, table: Vec<usize>) -> Result<Self, ValidationError> {
        if size == 0 {
            return Err(ValidationError::EmptyCarrier);
        }
        if unit >= size {
            return Err(ValidationError::UnitOutOfRange(unit));
        }
        assert_eq!(table.len(), size * size, "table must be {size}x{size}");
        for row in 0..size {
            for col in 0..size {
                let value = table[row * size + col];
                if value >= size {
                    return Err(ValidationError::EntryOutOfRange { row, col, value });
                }
            }
        }
        let m = FinOrdMonoid { size, unit, table };
        for a in 0..size {
            if m.mul(unit, a) != a || m.mul(a, unit) != a {
                return Err(ValidationError::NoIdentity(a));
            }
        }
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if m.mul(m.mul(a, b), c) != m.mul(a, m.mul(b, c)) {
                        return Err(ValidationError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        for a in 0..size {
            if m.mul(a, a) != a {
                return Err(ValidationError::NotIdempotent(a));
            }
        }
        for a in 0..size {
            for b in a + 1..size {
                for c in 0..size {
                    if m.mul(c, a) > m.mul(c, b) || m.mul(a, c) > m.mul(b, c) {
                        return Err(ValidationError::NotMonotone(a, b, c));
                    }
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                let p = m.mul(a, b);
                if p != a && p != b {
                    return Err(ValidationError::ChoiceViolation(a, b));
                }
            }
        }
        Ok(m)
    }

    /// The one-element algebra.
    pub fn trivial() -> Self {
        FinOrdMonoid { size: 1, unit: 0, table: vec![0] }
    }

    /// Builds without validating. For internal constructions that are
    /// correct by construction; debug builds still validate.
    pub(crate) fn from_parts_unchecked(size: usize, unit: usize, table: Vec<usize>) -> Self {
        debug_assert!(FinOrdMonoid::new(size, unit, table.clone()).is_ok());
        FinOrdMonoid { size, unit, table }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|a| (a + 1..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Commutativity plus the top/bottom case of a nontrivial algebra.
    ///
    /// The case is determined by the pair `(bottom*top, top*bottom)`: both
    /// products land in `{bottom, top}` and each of the four combinations
    /// forces one global pattern.
    pub fn classify(&self) -> Classification {
        let commutative = self.is_commutative();
        if self.size == 1 {
            return Classification { commutative, top_bottom_case: None };
        }
        let bottom = 0;
        let top = self.size - 1;
        let bt = self.mul(bottom, top);
        let tb = self.mul(top, bottom);
        let case = match (bt == bottom, tb == bottom) {
            (true, true) => TopBottomCase::BottomAbsorbing,
            (false, false) => TopBottomCase::TopAbsorbing,
            (true, false) => TopBottomCase::LeftAbsorbing,
            (false, true) => TopBottomCase::RightAbsorbing,
        };
        Classification { commutative, top_bottom_case: Some(case) }
    }

    /// The algebra on the reversed chain; products are unchanged.
    pub fn order_dual(&self) -> Self {
        let n = self.size;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = n - 1 - self.mul(n - 1 - a, n - 1 - b);
            }
        }
        FinOrdMonoid::from_parts_unchecked(n, n - 1 - self.unit, table)
    }

    /// The algebra with the two product arguments swapped; the order is unchanged.
    pub fn opposite(&self) -> Self {
        let n = self.size;
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.mul(b, a);
            }
        }
        FinOrdMonoid::from_parts_unchecked(n, self.unit, table)
    }

    /// The subalgebra on `elements ∪ {unit}`, re-ranked to `0..k`, together
    /// with the inclusion map. The law `a*b ∈ {a, b}` makes every such
    /// subset closed under the product.
    pub fn generated_subalgebra(&self, elements: &[usize]) -> (FinOrdMonoid, ElementMap) {
        let mut carrier: Vec<usize> = elements.to_vec();
        carrier.push(self.unit);
        carrier.sort_unstable();
        carrier.dedup();
        for &x in &carrier {
            assert!(x < self.size, "element {x} out of range");
        }
        let k = carrier.len();
        let rank_of = |x: usize| carrier.binary_search(&x).unwrap();
        let mut table = vec![0; k * k];
        for (i, &a) in carrier.iter().enumerate() {
            for (j, &b) in carrier.iter().enumerate() {
                table[i * k + j] = rank_of(self.mul(a, b));
            }
        }
        let sub = FinOrdMonoid::from_parts_unchecked(k, rank_of(self.unit), table);
        let include = ElementMap { source_size: k, target_size: self.size, image: carrier };
        (sub, include)
    }

    /// Writes the text format: a header line `n unit`, then `n` rows of the
    /// table, space-separated, with a trailing newline.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.size, self.unit);
        for a in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|b| self.mul(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Reads the text format. Blank lines and `#` comments are skipped;
    /// the table is validated.
    pub fn from_text(text: &str) -> Result<Self, ParseAlgebraError> {
        let mut rows: Vec<(usize, Vec<usize>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let nums: Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
            match nums {
                Ok(v) => rows.push((lineno + 1, v)),
                Err(e) => {
                    return Err(ParseAlgebraError::Malformed(lineno + 1, e.to_string()));
                }
            }
        }
        let (first_line, header) = rows
            .first()
            .ok_or_else(|| ParseAlgebraError::Malformed(0, "empty input".into()))?
            .clone();
        if header.len() != 2 {
            return Err(ParseAlgebraError::Malformed(
                first_line,
                "header must be `n unit`".into(),
            ));
        }
        let (n, unit) = (header[0], header[1]);
        if rows.len() != n + 1 {
            return Err(ParseAlgebraError::Malformed(
                first_line,
                format!("expected {} table rows, found {}", n, rows.len() - 1),
            ));
        }
        let mut table = Vec::with_capacity(n * n);
        for (lineno, row) in &rows[1..] {
            if row.len() != n {
                return Err(ParseAlgebraError::Malformed(
                    *lineno,
                    format!("expected {} entries, found {}", n, row.len()),
                ));
            }
            table.extend_from_slice(row);
        }
        Ok(FinOrdMonoid::new(n, unit, table)?)
    }
}

impl fmt::Display for FinOrdMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for FinOrdMonoid {
    type Err = ParseAlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FinOrdMonoid::from_text(s)
    }
}

/// A map between the carriers of two algebras, stored by image ranks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementMap {
    pub source_size: usize,
    pub target_size: usize,
    /// `image[a]` is where rank `a` of the source goes.
    pub image: Vec<usize>,
}

impl ElementMap {
    pub fn new(source_size: usize, target_size: usize, image: Vec<usize>) -> Self {
        assert_eq!(image.len(), source_size);
        ElementMap { source_size, target_size, image }
    }

    pub fn identity(size: usize) -> Self {
        ElementMap { source_size: size, target_size: size, image: (0..size).collect() }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.image[a]
    }

    /// `self` then `next`.
    pub fn compose(&self, next: &ElementMap) -> ElementMap {
        assert_eq!(self.target_size, next.source_size);
        ElementMap {
            source_size: self.source_size,
            target_size: next.target_size,
            image: self.image.iter().map(|&a| next.image[a]).collect(),
        }
    }

    pub fn image_set(&self) -> Vec<usize> {
        let mut v = self.image.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// First failure found when checking a map, in the scan order: unit, then
/// products, then monotonicity, then injectivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapViolation {
    TargetOutOfRange(usize),
    UnitNotPreserved,
    ProductNotPreserved(usize, usize),
    NotMonotone(usize, usize),
    NotInjective(usize, usize),
}

/// Result of [`check_map`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapCheck {
    pub is_homomorphism: bool,
    pub is_embedding: bool,
    pub witness: Option<MapViolation>,
}

/// Checks whether `f` is a homomorphism (unit-, product-, and
/// order-preserving) and whether it is additionally an embedding
/// (injective). On a chain, order preservation is monotonicity of the
/// image sequence; injective monotone maps are automatically order
/// reflecting.
pub fn check_map(source: &FinOrdMonoid, target: &FinOrdMonoid, f: &ElementMap) -> MapCheck {
    assert_eq!(f.source_size, source.size());
    assert_eq!(f.target_size, target.size());
    let fail = |witness| MapCheck { is_homomorphism: false, is_embedding: false, witness: Some(witness) };
    for a in 0..source.size() {
        if f.apply(a) >= target.size() {
            return fail(MapViolation::TargetOutOfRange(a));
        }
    }
    if f.apply(source.unit()) != target.unit() {
        return fail(MapViolation::UnitNotPreserved);
    }
    for a in 0..source.size() {
        for b in 0..source.size() {
            if f.apply(source.mul(a, b)) != target.mul(f.apply(a), f.apply(b)) {
                return fail(MapViolation::ProductNotPreserved(a, b));
            }
        }
    }
    for a in 0..source.size().saturating_sub(1) {
        if f.apply(a) > f.apply(a + 1) {
            return fail(MapViolation::NotMonotone(a, a + 1));
        }
    }
    for a in 0..source.size() {
        for b in a + 1..source.size() {
            if f.apply(a) == f.apply(b) {
                return MapCheck {
                    is_homomorphism: true,
                    is_embedding: false,
                    witness: Some(MapViolation::NotInjective(a, b)),
                };
            }
        }
    }
    MapCheck { is_homomorphism: true, is_embedding: true, witness: None }
}
