//! Labelled partitions of the barred set {1, 1̄, ..., n, n̄} and of integers.
//!
//! A labelled partition is a set partition of the 2n barred symbols that is
//! closed under the bar involution, together with an injective assignment of
//! two-torsion labels to exactly the bar-invariant blocks. These are the
//! combinatorial layers of the arrangement; the admissible subset depends on
//! the root family.

use crate::error::{Error, Result};
use crate::ground::{GroundSpace, RootFamily, Torsion};
use std::collections::BTreeMap;
use std::fmt;

/// One of the 2n symbols: `index` in 1..=n, barred or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BarredElement {
    pub index: usize,
    pub barred: bool,
}

impl BarredElement {
    pub fn new(index: usize, barred: bool) -> BarredElement {
        BarredElement { index, barred }
    }

    /// The bar involution.
    pub fn bar(self) -> BarredElement {
        BarredElement { index: self.index, barred: !self.barred }
    }

    /// Packed code ordering 1 < 1̄ < 2 < 2̄ < ...
    pub(crate) fn code(self) -> u16 {
        (2 * (self.index - 1) + usize::from(self.barred)) as u16
    }

    pub(crate) fn from_code(c: u16) -> BarredElement {
        BarredElement { index: (c / 2) as usize + 1, barred: c % 2 == 1 }
    }
}

impl fmt::Display for BarredElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.index, if self.barred { "-" } else { "" })
    }
}

pub(crate) fn bar_code(c: u16) -> u16 {
    c ^ 1
}

/// A bar-closed partition of the 2n barred symbols with injective two-torsion
/// labels on its bar-invariant blocks. Always held in canonical form: blocks
/// internally sorted, block list sorted by (size descending, lexicographic).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelledPartition {
    n: usize,
    blocks: Vec<Vec<u16>>,
    labels: Vec<Option<Torsion>>,
}

impl LabelledPartition {
    /// Build from explicit blocks, validating every structural invariant.
    pub fn new(
        n: usize,
        blocks: Vec<Vec<BarredElement>>,
        labels: BTreeMap<usize, Torsion>,
    ) -> Result<LabelledPartition> {
        let raw: Vec<Vec<u16>> = blocks
            .iter()
            .map(|b| b.iter().map(|e| e.code()).collect())
            .collect();
        let lab: Vec<Option<Torsion>> =
            (0..raw.len()).map(|i| labels.get(&i).copied()).collect();
        let mut seen = vec![false; 2 * n];
        for b in &raw {
            for &c in b {
                let c = c as usize;
                if c >= 2 * n || seen[c] {
                    return Err(Error::Invalid("blocks do not partition the barred set".into()));
                }
                seen[c] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::Invalid("blocks do not cover the barred set".into()));
        }
        let p = Self::from_codes(n, raw, lab);
        p.validate()?;
        Ok(p)
    }

    /// Canonicalize pre-checked block data. Used by enumeration and the group
    /// action, which produce structurally valid partitions by construction.
    pub(crate) fn from_codes(
        n: usize,
        mut blocks: Vec<Vec<u16>>,
        labels: Vec<Option<Torsion>>,
    ) -> LabelledPartition {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        let mut order: Vec<usize> = (0..blocks.len()).collect();
        order.sort_by(|&i, &j| {
            blocks[j].len().cmp(&blocks[i].len()).then_with(|| blocks[i].cmp(&blocks[j]))
        });
        let blocks_sorted: Vec<Vec<u16>> = order.iter().map(|&i| blocks[i].clone()).collect();
        let labels_sorted: Vec<Option<Torsion>> = order.iter().map(|&i| labels[i]).collect();
        LabelledPartition { n, blocks: blocks_sorted, labels: labels_sorted }
    }

    fn validate(&self) -> Result<()> {
        // bar-closure and the labelled-iff-bar-invariant rule
        for (i, b) in self.blocks.iter().enumerate() {
            let barred: Vec<u16> = {
                let mut v: Vec<u16> = b.iter().map(|&c| bar_code(c)).collect();
                v.sort_unstable();
                v
            };
            let invariant = barred == *b;
            if !self.blocks.contains(&barred) {
                return Err(Error::Invalid("partition is not bar-closed".into()));
            }
            if invariant != self.labels[i].is_some() {
                return Err(Error::Invalid(
                    "a block is labelled iff it is bar-invariant".into(),
                ));
            }
        }
        let mut used: Vec<Torsion> = self.labels.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        if used.len() != self.labels.iter().flatten().count() {
            return Err(Error::Invalid("labels are not injective".into()));
        }
        Ok(())
    }

    /// The discrete partition: all singletons, rank 0.
    pub fn bottom(n: usize) -> LabelledPartition {
        let blocks = (0..2 * n as u16).map(|c| vec![c]).collect::<Vec<_>>();
        let labels = vec![None; 2 * n];
        LabelledPartition::from_codes(n, blocks, labels)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize) -> Vec<BarredElement> {
        self.blocks[i].iter().map(|&c| BarredElement::from_code(c)).collect()
    }

    pub(crate) fn raw_blocks(&self) -> &[Vec<u16>] {
        &self.blocks
    }

    pub fn label_of(&self, block: usize) -> Option<Torsion> {
        self.labels[block]
    }

    /// Map from symbol code to containing block index.
    pub(crate) fn block_of_code(&self) -> Vec<usize> {
        let mut map = vec![usize::MAX; 2 * self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &c in b {
                map[c as usize] = i;
            }
        }
        map
    }

    /// Indices of unlabelled blocks, grouped as pairs (S, S̄) with the
    /// lexicographically smaller block first.
    pub fn unlabelled_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        let mut taken = vec![false; self.blocks.len()];
        for i in 0..self.blocks.len() {
            if self.labels[i].is_some() || taken[i] {
                continue;
            }
            let barred: Vec<u16> = {
                let mut v: Vec<u16> = self.blocks[i].iter().map(|&c| bar_code(c)).collect();
                v.sort_unstable();
                v
            };
            let j = self
                .blocks
                .iter()
                .position(|b| *b == barred)
                .expect("bar-closed partition");
            taken[i] = true;
            taken[j] = true;
            pairs.push((i, j));
        }
        pairs
    }

    /// Indices of labelled blocks together with their labels and supports
    /// (the underlying unbarred indices, 1-based, sorted).
    pub fn labelled_blocks(&self) -> Vec<(usize, Torsion, Vec<usize>)> {
        let mut out = Vec::new();
        for (i, lab) in self.labels.iter().enumerate() {
            if let Some(z) = lab {
                let mut support: Vec<usize> = self.blocks[i]
                    .iter()
                    .map(|&c| BarredElement::from_code(c).index)
                    .collect();
                support.sort_unstable();
                support.dedup();
                out.push((i, *z, support));
            }
        }
        out
    }

    /// n minus half the number of unlabelled blocks.
    pub fn rank(&self) -> usize {
        let unlabelled = self.labels.iter().filter(|l| l.is_none()).count();
        debug_assert!(unlabelled % 2 == 0);
        self.n - unlabelled / 2
    }

    /// Refinement order respecting labels: every block of `self` lies inside a
    /// block of `other`, and each labelled block lands in the block with the
    /// same label.
    pub fn leq(&self, other: &LabelledPartition) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(format!(
                "leq on partitions of {} and {}",
                self.n, other.n
            )));
        }
        let where_other = other.block_of_code();
        for (i, b) in self.blocks.iter().enumerate() {
            let target = where_other[b[0] as usize];
            if b.iter().any(|&c| where_other[c as usize] != target) {
                return Ok(false);
            }
            if let Some(z) = self.labels[i] {
                if other.labels[target] != Some(z) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The labelled integer partition recording |Σ_z|/2 per label and the
    /// sizes |S| over unlabelled pairs {S, S̄}.
    pub fn hat(&self) -> IntegerLabelledPartition {
        let mut labelled = BTreeMap::new();
        for (_, z, support) in self.labelled_blocks() {
            labelled.insert(z, support.len());
        }
        let mut unlabelled: Vec<usize> = self
            .unlabelled_pairs()
            .iter()
            .map(|&(i, _)| self.blocks[i].len())
            .collect();
        unlabelled.sort_unstable_by(|a, b| b.cmp(a));
        IntegerLabelledPartition { labelled, unlabelled }
    }

    /// Admissibility for a root family over a ground space.
    pub fn is_admissible(&self, family: RootFamily, space: &GroundSpace) -> bool {
        for lab in self.labels.iter().flatten() {
            if !space.contains(*lab) {
                return false;
            }
        }
        match family {
            RootFamily::C => true,
            RootFamily::B => self
                .labelled_blocks()
                .iter()
                .all(|(_, z, support)| support.len() != 1 || z.is_identity()),
            RootFamily::D => self.labelled_blocks().iter().all(|(_, _, s)| s.len() != 1),
            RootFamily::A => {
                // no labels, and every block purely barred or purely unbarred
                self.labels.iter().all(|l| l.is_none())
                    && self
                        .blocks
                        .iter()
                        .all(|b| b.iter().all(|c| c % 2 == 0) || b.iter().all(|c| c % 2 == 1))
            }
        }
    }

    /// Deterministic normal form. Values are kept canonical at construction,
    /// so this is the identity; it exists as the explicit idempotent op.
    pub fn canonical_form(&self) -> LabelledPartition {
        LabelledPartition::from_codes(self.n, self.blocks.clone(), self.labels.clone())
    }

    /// Mandated JSON form, e.g.
    /// `{"n":4,"blocks":[["1","1-"],["2","4-"],["2-","4"],["3"],["3-"]],"labels":{"0":"e"}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let blocks: Vec<Vec<String>> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&c| BarredElement::from_code(c).to_string()).collect())
            .collect();
        let mut labels = serde_json::Map::new();
        for (i, lab) in self.labels.iter().enumerate() {
            if let Some(z) = lab {
                labels.insert(i.to_string(), serde_json::Value::String(z.name().to_string()));
            }
        }
        serde_json::json!({ "n": self.n, "blocks": blocks, "labels": labels })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<LabelledPartition> {
        let bad = |m: &str| Error::Invalid(format!("labelled partition JSON: {m}"));
        let n = v.get("n").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing n"))? as usize;
        let blocks_v = v
            .get("blocks")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("missing blocks"))?;
        let mut blocks = Vec::new();
        for b in blocks_v {
            let arr = b.as_array().ok_or_else(|| bad("block is not an array"))?;
            let mut block = Vec::new();
            for e in arr {
                let s = e.as_str().ok_or_else(|| bad("element is not a string"))?;
                let (digits, barred) = match s.strip_suffix('-') {
                    Some(d) => (d, true),
                    None => (s, false),
                };
                let index: usize =
                    digits.parse().map_err(|_| bad("element is not an integer"))?;
                if index < 1 || index > n {
                    return Err(bad("element index out of range"));
                }
                block.push(BarredElement::new(index, barred));
            }
            blocks.push(block);
        }
        let mut labels = BTreeMap::new();
        if let Some(map) = v.get("labels").and_then(|x| x.as_object()) {
            for (k, val) in map {
                let i: usize = k.parse().map_err(|_| bad("label key is not an index"))?;
                let name = val.as_str().ok_or_else(|| bad("label value is not a string"))?;
                if i >= blocks.len() {
                    return Err(bad("label index out of range"));
                }
                labels.insert(i, Torsion::from_name(name)?);
            }
        }
        LabelledPartition::new(n, blocks, labels)
    }
}

impl fmt::Display for LabelledPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{{")?;
            for (j, &c) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", BarredElement::from_code(c))?;
            }
            write!(f, "}}")?;
            if let Some(z) = self.labels[i] {
                write!(f, "_{z}")?;
            }
        }
        write!(f, "}}")
    }
}

/// A partition of an integer labelled by two-torsion: nonzero values per
/// label plus weakly decreasing unlabelled parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntegerLabelledPartition {
    labelled: BTreeMap<Torsion, usize>,
    unlabelled: Vec<usize>,
}

impl IntegerLabelledPartition {
    pub fn new(labelled: BTreeMap<Torsion, usize>, mut unlabelled: Vec<usize>) -> Self {
        debug_assert!(labelled.values().all(|&v| v > 0));
        debug_assert!(unlabelled.iter().all(|&v| v > 0));
        unlabelled.sort_unstable_by(|a, b| b.cmp(a));
        IntegerLabelledPartition { labelled, unlabelled }
    }

    pub fn empty() -> Self {
        IntegerLabelledPartition { labelled: BTreeMap::new(), unlabelled: vec![] }
    }

    pub fn labelled(&self) -> &BTreeMap<Torsion, usize> {
        &self.labelled
    }

    pub fn unlabelled(&self) -> &[usize] {
        &self.unlabelled
    }

    pub fn total(&self) -> usize {
        self.labelled.values().sum::<usize>() + self.unlabelled.iter().sum::<usize>()
    }

    /// λ⟨n⟩: keep labels, add one to each unlabelled part, pad with ones.
    /// The result has exactly n − |λ| unlabelled parts.
    pub fn pad(&self, n: usize) -> Result<IntegerLabelledPartition> {
        let q = self.total();
        let ell = self.unlabelled.len();
        if n < q + ell {
            return Err(Error::Range(format!(
                "cannot pad a partition of {q} with {ell} unlabelled parts to {n}"
            )));
        }
        let mut unlabelled: Vec<usize> = self.unlabelled.iter().map(|&p| p + 1).collect();
        unlabelled.extend(std::iter::repeat_n(1, n - q - ell));
        Ok(IntegerLabelledPartition { labelled: self.labelled.clone(), unlabelled })
    }
}

impl fmt::Display for IntegerLabelledPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut first = true;
        for (z, v) in &self.labelled {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{v}_{z}")?;
            first = false;
        }
        for p in &self.unlabelled {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        write!(f, ")")
    }
}

/// All admissible labelled partitions for the family and space at size `n`,
/// optionally truncated to rank at most `max_rank`. Canonical forms, no
/// duplicates; order is deterministic.
pub fn enumerate(
    family: RootFamily,
    space: &GroundSpace,
    n: usize,
    max_rank: Option<usize>,
) -> Vec<LabelledPartition> {
    assert!(n >= 1, "enumerate requires n >= 1");
    let cap = max_rank.unwrap_or(n);
    let mut out = Vec::new();
    // Pairs are built as a representative block S (the one containing its
    // smallest index unbarred); labelled blocks as (support, label).
    let mut pairs: Vec<Vec<u16>> = Vec::new();
    let mut labelled: Vec<(Vec<usize>, Torsion)> = Vec::new();
    rec(family, space, n, cap, 1, &mut pairs, &mut labelled, &mut out);
    out.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.cmp(b)));
    out
}

#[allow(clippy::too_many_arguments)]
fn rec(
    family: RootFamily,
    space: &GroundSpace,
    n: usize,
    cap: usize,
    next: usize,
    pairs: &mut Vec<Vec<u16>>,
    labelled: &mut Vec<(Vec<usize>, Torsion)>,
    out: &mut Vec<LabelledPartition>,
) {
    // Every later element can raise the pair count by at most one, so the
    // final rank is at least (placed so far) - (pairs so far).
    let placed = next - 1;
    if placed > pairs.len() + cap {
        return;
    }
    if next > n {
        if family == RootFamily::B
            && labelled.iter().any(|(s, z)| s.len() == 1 && !z.is_identity())
        {
            return;
        }
        if family == RootFamily::D && labelled.iter().any(|(s, _)| s.len() == 1) {
            return;
        }
        out.push(build(n, pairs, labelled));
        return;
    }
    let e = BarredElement::new(next, false).code();
    // join an existing pair, as next or as next-bar
    for i in 0..pairs.len() {
        pairs[i].push(e);
        rec(family, space, n, cap, next + 1, pairs, labelled, out);
        pairs[i].pop();
        if family != RootFamily::A {
            pairs[i].push(bar_code(e));
            rec(family, space, n, cap, next + 1, pairs, labelled, out);
            pairs[i].pop();
        }
    }
    // join an existing labelled block
    if family != RootFamily::A {
        for i in 0..labelled.len() {
            labelled[i].0.push(next);
            rec(family, space, n, cap, next + 1, pairs, labelled, out);
            labelled[i].0.pop();
        }
    }
    // start a new singleton pair
    pairs.push(vec![e]);
    rec(family, space, n, cap, next + 1, pairs, labelled, out);
    pairs.pop();
    // start a new labelled block with an unused label
    if family != RootFamily::A {
        for z in space.torsion_elements() {
            if labelled.iter().any(|(_, used)| *used == z) {
                continue;
            }
            labelled.push((vec![next], z));
            rec(family, space, n, cap, next + 1, pairs, labelled, out);
            labelled.pop();
        }
    }
}

fn build(n: usize, pairs: &[Vec<u16>], labelled: &[(Vec<usize>, Torsion)]) -> LabelledPartition {
    let mut blocks = Vec::new();
    let mut labels = Vec::new();
    for p in pairs {
        blocks.push(p.clone());
        labels.push(None);
        blocks.push(p.iter().map(|&c| bar_code(c)).collect());
        labels.push(None);
    }
    for (support, z) in labelled {
        let mut b = Vec::with_capacity(2 * support.len());
        for &i in support {
            b.push(BarredElement::new(i, false).code());
            b.push(BarredElement::new(i, true).code());
        }
        blocks.push(b);
        labels.push(Some(*z));
    }
    LabelledPartition::from_codes(n, blocks, labels)
}
