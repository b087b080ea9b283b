//! The second Leray page of the complement as exact class functions, its
//! decomposition into induced pieces, the degree-one differential in the
//! elliptic case, Betti numbers where the sequence degenerates, and
//! representation-stability scans.
//!
//! Characters are computed by the fixed-layer trace formula: the trace of w
//! on E2^{pq} is the sum over w-fixed rank-q layers of the trace on the
//! ambient cohomology of the layer times the trace on the top Orlik–Solomon
//! component of its localization. The induced-piece route recomputes the same
//! object through orbit representatives and is kept independent as a
//! cross-check.

use crate::characters::{
    char_table, induce_from_parabolic, pad_bipartition, pad_partition, ClassFunction, ClassId,
    Group, IrrId,
};
use crate::combin::partitions_bounded;
use crate::error::{Error, Result};
use crate::ground::{GroundSpace, RootFamily, SpaceKind, Torsion};
use crate::linalg::{kernel_basis, rank_rational, IMat};
use crate::os::OsTop;
use crate::partition::{enumerate, BarredElement, IntegerLabelledPartition, LabelledPartition};
use crate::poset::LayerPoset;
use crate::weyl::{class_representative, SignedCycleType, SignedPermutation};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

/// The group acting on the arrangement of the family.
pub fn acting_group(family: RootFamily, n: usize) -> Group {
    if family.uses_signs() {
        Group::W(n)
    } else {
        Group::S(n)
    }
}

fn rep_of_class(class: &ClassId) -> SignedPermutation {
    match class {
        ClassId::S(mu) => class_representative(&SignedCycleType { pos: mu.clone(), neg: vec![] }),
        ClassId::W(c) => class_representative(c),
    }
}

#[derive(Debug, Clone)]
struct PairCycle {
    len: usize,
    flipped: bool,
    block_size: usize,
    /// Smallest support coordinate (1-based) of the starting pair.
    support_min: usize,
}

/// Cycles of w on the unlabelled block pairs of a fixed partition, with the
/// sign of the composite map around each cycle.
fn pair_cycles(w: &SignedPermutation, p: &LabelledPartition) -> Vec<PairCycle> {
    let pairs = p.unlabelled_pairs();
    let where_block = p.block_of_code();
    // block index -> (pair number, is the representative side)
    let mut side: HashMap<usize, (usize, bool)> = HashMap::new();
    for (k, &(rep, conj)) in pairs.iter().enumerate() {
        side.insert(rep, (k, true));
        side.insert(conj, (k, false));
    }
    let mut next: Vec<(usize, bool)> = Vec::with_capacity(pairs.len());
    for &(rep, _) in &pairs {
        let img_code = w.apply_code(p.raw_blocks()[rep][0]);
        let img_block = where_block[img_code as usize];
        let (k, is_rep) = side[&img_block];
        next.push((k, !is_rep));
    }
    let mut seen = vec![false; pairs.len()];
    let mut out = Vec::new();
    for start in 0..pairs.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut flip = false;
        let mut at = start;
        loop {
            seen[at] = true;
            len += 1;
            let (to, f) = next[at];
            flip ^= f;
            at = to;
            if at == start {
                break;
            }
        }
        let rep_block = &p.raw_blocks()[pairs[start].0];
        let support_min = BarredElement::from_code(*rep_block.iter().min().unwrap()).index;
        out.push(PairCycle { len, flipped: flip, block_size: rep_block.len(), support_min });
    }
    out
}

fn poly_mul_trunc(a: &[i64], b: &[i64], deg: usize) -> Vec<i64> {
    let mut out = vec![0i64; deg + 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if i + j <= deg {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Graded-trace polynomial of one cycle of `len` factors of X, with the
/// composite map inverting iff `flipped`: degree d contributes
/// (-1)^{d(len-1)} tr(inv^s | H^d) at t^{d·len}.
fn cycle_poly(space: &GroundSpace, len: usize, flipped: bool, deg: usize) -> Vec<i64> {
    let mut out = vec![0i64; deg + 1];
    out[0] = 1;
    for d in 1..=2usize {
        let at = d * len;
        if at <= deg {
            let koszul = if (d * (len - 1)) % 2 == 0 { 1 } else { -1 };
            out[at] += koszul * space.torsion_twist_trace(d, flipped);
        }
    }
    out
}

/// Trace of w on H^deg(F_Σ). Requires w·Σ = Σ; labelled blocks contribute
/// the point factor H^0.
pub fn ambient_trace(
    w: &SignedPermutation,
    p: &LabelledPartition,
    deg: usize,
    space: &GroundSpace,
) -> i64 {
    let mut poly = vec![0i64; deg + 1];
    poly[0] = 1;
    for c in pair_cycles(w, p) {
        poly = poly_mul_trunc(&poly, &cycle_poly(space, c.len, c.flipped, deg), deg);
    }
    poly[deg]
}

/// dim H^deg(X^factors).
pub fn ambient_dim(space: &GroundSpace, factors: usize, deg: usize) -> i64 {
    let mut poly = vec![0i64; deg + 1];
    poly[0] = 1;
    let one = cycle_poly(space, 1, false, deg);
    for _ in 0..factors {
        poly = poly_mul_trunc(&poly, &one, deg);
    }
    poly[deg]
}

/// Trace of w on the top Orlik–Solomon component of the localization at Σ.
pub fn local_os_trace(
    w: &SignedPermutation,
    p: &LabelledPartition,
    family: RootFamily,
) -> Result<i64> {
    if w.act(p)? != *p {
        return Err(Error::Invalid("element does not stabilize the layer".into()));
    }
    Ok(OsTop::build(p, family).trace(w))
}

/// Character of E2^{pq}(n) by the fixed-layer trace sum.
pub fn e2_character(
    p: usize,
    q: usize,
    n: usize,
    family: RootFamily,
    space: &GroundSpace,
) -> Result<ClassFunction> {
    let group = acting_group(family, n);
    let table = char_table(group);
    let reps: Vec<SignedPermutation> = table.classes.iter().map(rep_of_class).collect();
    let mut values = vec![BigRational::zero(); table.classes.len()];
    if q > n {
        return Ok(ClassFunction { group, values });
    }
    let slice: Vec<LabelledPartition> = enumerate(family, space, n, Some(q))
        .into_iter()
        .filter(|s| s.rank() == q)
        .collect();
    for sigma in &slice {
        let os = OsTop::build(sigma, family);
        for (ci, w) in reps.iter().enumerate() {
            if w.act(sigma)? != *sigma {
                continue;
            }
            let amb = ambient_trace(w, sigma, p, space);
            if amb == 0 {
                continue;
            }
            let tr = amb * os.trace(w);
            values[ci] += BigRational::from(BigInt::from(tr));
        }
    }
    Ok(ClassFunction { group, values })
}

/// One induced summand of the second-page decomposition of E2^{pq}(n).
#[derive(Debug, Clone)]
pub struct InducedPiece {
    pub lambda: IntegerLabelledPartition,
    pub r: usize,
    pub alpha: Vec<usize>,
    pub k: usize,
    /// Character of V(λ, r, α) on W_k (S_k in type A).
    pub inner: ClassFunction,
}

impl InducedPiece {
    pub fn induced_dim(&self, n: usize) -> usize {
        induce_from_parabolic(&self.inner, n).expect("k ≤ n").dim_usize()
    }

    pub fn to_json(&self, n: usize) -> serde_json::Value {
        serde_json::json!({
            "lambda": self.lambda.to_string(),
            "r": self.r,
            "alpha": self.alpha,
            "k": self.k,
            "inner": self.inner.to_json(),
            "induced_dim": self.induced_dim(n),
        })
    }
}

/// The integer labelled partitions of q whose fibers are admissible for the
/// family.
fn admissible_lambdas(
    q: usize,
    family: RootFamily,
    space: &GroundSpace,
) -> Vec<IntegerLabelledPartition> {
    let torsion: Vec<Torsion> =
        if family == RootFamily::A { vec![] } else { space.torsion_elements() };
    let mut out = Vec::new();
    let mut labelled: BTreeMap<Torsion, usize> = BTreeMap::new();
    fn rec(
        torsion: &[Torsion],
        idx: usize,
        remaining: usize,
        family: RootFamily,
        labelled: &mut BTreeMap<Torsion, usize>,
        out: &mut Vec<IntegerLabelledPartition>,
    ) {
        if idx == torsion.len() {
            for unlabelled in partitions_bounded(remaining, remaining.max(1)) {
                out.push(IntegerLabelledPartition::new(labelled.clone(), unlabelled));
            }
            return;
        }
        let z = torsion[idx];
        rec(torsion, idx + 1, remaining, family, labelled, out);
        for v in 1..=remaining {
            let ok = match family {
                RootFamily::B => v != 1 || z.is_identity(),
                RootFamily::D => v != 1,
                _ => true,
            };
            if ok {
                labelled.insert(z, v);
                rec(torsion, idx + 1, remaining - v, family, labelled, out);
                labelled.remove(&z);
            }
        }
    }
    rec(&torsion, 0, q, family, &mut labelled, &mut out);
    out.sort();
    out
}

/// The left-justified representative with hat λ⟨k⟩ on k coordinates:
/// labelled blocks first, then the padded unlabelled pairs, then singletons.
fn representative_partition(lambda: &IntegerLabelledPartition, k: usize) -> LabelledPartition {
    let mut blocks: Vec<Vec<u16>> = Vec::new();
    let mut labels: Vec<Option<Torsion>> = Vec::new();
    let mut next = 1usize;
    for (&z, &v) in lambda.labelled() {
        let mut b = Vec::new();
        for i in next..next + v {
            b.push(BarredElement::new(i, false).code());
            b.push(BarredElement::new(i, true).code());
        }
        blocks.push(b);
        labels.push(Some(z));
        next += v;
    }
    for &part in lambda.unlabelled() {
        let size = part + 1;
        let plus: Vec<u16> =
            (next..next + size).map(|i| BarredElement::new(i, false).code()).collect();
        let minus: Vec<u16> =
            (next..next + size).map(|i| BarredElement::new(i, true).code()).collect();
        blocks.push(plus);
        labels.push(None);
        blocks.push(minus);
        labels.push(None);
        next += size;
    }
    while next <= k {
        blocks.push(vec![BarredElement::new(next, false).code()]);
        labels.push(None);
        blocks.push(vec![BarredElement::new(next, true).code()]);
        labels.push(None);
        next += 1;
    }
    LabelledPartition::from_codes(k, blocks, labels)
}

/// Trace of a stabilizing h on H^r(F') ⊗ ⊗_j H^{a_j}(X_j) ⊗ OS_q, where the
/// degrees a_j sit on the singleton coordinates.
fn summand_trace(
    h: &SignedPermutation,
    sigma: &LabelledPartition,
    os: &OsTop,
    degrees: &[usize],
    r: usize,
    space: &GroundSpace,
) -> i64 {
    let mut fprime = vec![0i64; r + 1];
    fprime[0] = 1;
    let mut single = 1i64;
    for c in pair_cycles(h, sigma) {
        if c.block_size >= 2 {
            fprime = poly_mul_trunc(&fprime, &cycle_poly(space, c.len, c.flipped, r), r);
        } else {
            let d = degrees[c.support_min - 1];
            let koszul = if (d * (c.len - 1)) % 2 == 0 { 1 } else { -1 };
            single *= koszul * space.torsion_twist_trace(d, c.flipped);
        }
    }
    fprime[r] * single * os.trace(h)
}

/// The induced pieces of E2^{pq}(n). Pieces whose representative does not fit
/// at this n are dropped; the sum of the induced pieces is asserted against
/// the fixed-layer character.
pub fn e2_pieces(
    p: usize,
    q: usize,
    n: usize,
    family: RootFamily,
    space: &GroundSpace,
) -> Result<Vec<InducedPiece>> {
    let mut pieces = Vec::new();
    for lambda in admissible_lambdas(q, family, space) {
        let ell = lambda.unlabelled().len();
        if n < q + ell {
            continue;
        }
        for r in 0..=p {
            if ambient_dim(space, ell, r) == 0 {
                continue;
            }
            for alpha in partitions_bounded(p - r, space.top_degree()) {
                let t = alpha.len();
                if t > n - q - ell {
                    continue;
                }
                let k = q + ell + t;
                assert!(k <= p + 2 * q, "piece size bound of the decomposition");
                let sigma = representative_partition(&lambda, k);
                let mut degrees = vec![0usize; k];
                for (j, &a) in alpha.iter().enumerate() {
                    degrees[q + ell + j] = a;
                }
                let inner = inner_character(&sigma, &degrees, r, k, family, space)?;
                pieces.push(InducedPiece { lambda: lambda.clone(), r, alpha, k, inner });
            }
        }
    }
    // the two routes must agree as class functions
    let direct = e2_character(p, q, n, family, space)?;
    let mut total = ClassFunction::zero(direct.group);
    for piece in &pieces {
        total = total.add(&induce_from_parabolic(&piece.inner, n)?)?;
    }
    assert_eq!(
        total, direct,
        "induced pieces disagree with the fixed-layer character at (p,q,n) = ({p},{q},{n})"
    );
    Ok(pieces)
}

/// Character of Ind_H^{G_k} V(Σ, r, a), with H the joint stabilizer of the
/// representative partition and the degree assignment, found by enumeration.
fn inner_character(
    sigma: &LabelledPartition,
    degrees: &[usize],
    r: usize,
    k: usize,
    family: RootFamily,
    space: &GroundSpace,
) -> Result<ClassFunction> {
    if k > 6 {
        return Err(Error::Unsupported(
            "piece stabilizers are enumerated; p + 2q must stay desk-scale".into(),
        ));
    }
    let group = acting_group(family, k);
    let table = char_table(group);
    let os = OsTop::build(sigma, family);
    let elements = crate::weyl::all_elements(family, k);
    let mut h_values: HashMap<SignedPermutation, i64> = HashMap::new();
    for h in &elements {
        if h.act(sigma)? != *sigma {
            continue;
        }
        let preserves_degrees = (0..k).all(|i| degrees[h.image(i)] == degrees[i]);
        if !preserves_degrees {
            continue;
        }
        let tr = summand_trace(h, sigma, &os, degrees, r, space);
        h_values.insert(h.clone(), tr);
    }
    let h_order = BigInt::from(h_values.len());
    let mut values = Vec::with_capacity(table.classes.len());
    for class in &table.classes {
        let g = rep_of_class(class);
        let mut acc = BigInt::zero();
        for x in &elements {
            let conj = x.compose(&g)?.compose(&x.invert())?;
            if let Some(&v) = h_values.get(&conj) {
                acc += BigInt::from(v);
            }
        }
        let val = BigRational::new(acc, h_order.clone());
        debug_assert!(val.is_integer());
        values.push(val);
    }
    Ok(ClassFunction { group, values })
}

/// One bidegree of the second page, with both computation routes run and
/// reconciled.
#[derive(Debug, Clone)]
pub struct E2Cell {
    pub p: usize,
    pub q: usize,
    pub n: usize,
    pub family: RootFamily,
    pub space: SpaceKind,
    pub character: ClassFunction,
    pub pieces: Vec<InducedPiece>,
    pub dim: usize,
}

pub fn e2_cell(
    p: usize,
    q: usize,
    n: usize,
    family: RootFamily,
    space: &GroundSpace,
) -> Result<E2Cell> {
    let character = e2_character(p, q, n, family, space)?;
    let pieces = e2_pieces(p, q, n, family, space)?;
    let dim = character.dim_usize();
    // independent dimension route: ambient Betti number times the unsigned
    // Whitney number of the localization
    if q <= n {
        let poset = LayerPoset::build(family, space, n, Some(q));
        let mut total = BigInt::zero();
        for i in 0..poset.len() {
            if poset.rank_of[i] != q {
                continue;
            }
            let whitney = poset.local_os_dims(i)?[q].clone();
            let amb = ambient_dim(space, n - q, p);
            total += whitney * BigInt::from(amb);
        }
        assert_eq!(BigInt::from(dim), total, "dimension routes disagree");
    }
    Ok(E2Cell { p, q, n, family, space: space.kind, character, pieces, dim })
}

impl E2Cell {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "q": self.q,
            "n": self.n,
            "family": self.family.name(),
            "space": self.space.name(),
            "dim": self.dim,
            "character": self.character.to_json(),
            "pieces": self.pieces.iter().map(|x| x.to_json(self.n)).collect::<Vec<_>>(),
        })
    }
}

/// H^i of the complement where the sequence degenerates at the second page:
/// the whole antidiagonal for toric, the q-axis for linear.
pub fn betti(
    i: usize,
    n: usize,
    family: RootFamily,
    space: &GroundSpace,
) -> Result<(usize, ClassFunction)> {
    if space.kind == SpaceKind::Elliptic {
        return Err(Error::Unsupported(
            "elliptic cohomology beyond degree 1 is not computed; use elliptic_h1".into(),
        ));
    }
    let group = acting_group(family, n);
    let mut total = ClassFunction::zero(group);
    for p in 0..=i {
        let q = i - p;
        total = total.add(&e2_character(p, q, n, family, space)?)?;
    }
    Ok((total.dim_usize(), total))
}

/// Basis monomial of H^2(E^n): a product of two degree-one generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum H2Monomial {
    /// x_i x_j with i < j
    XX(usize, usize),
    /// y_i y_j with i < j
    YY(usize, usize),
    /// x_i y_j, any pair including i = j
    XY(usize, usize),
}

pub fn h2_basis(n: usize) -> Vec<H2Monomial> {
    let mut basis = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            basis.push(H2Monomial::XX(i, j));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            basis.push(H2Monomial::YY(i, j));
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            basis.push(H2Monomial::XY(i, j));
        }
    }
    basis
}

/// The degree-one elliptic differential d2: E2^{0,1} -> E2^{2,0}, with its
/// exact kernel.
#[derive(Debug)]
pub struct EllipticD2 {
    pub n: usize,
    pub family: RootFamily,
    /// Rank-one layers indexing the domain generators g_F.
    pub domain: Vec<LabelledPartition>,
    pub basis: Vec<H2Monomial>,
    /// Matrix over the monomial basis, rows = basis, cols = domain.
    pub matrix: IMat,
    pub rank: usize,
    /// Kernel basis vectors, each of length |domain|.
    pub kernel: Vec<Vec<BigRational>>,
}

enum RankOneKind {
    Diagonal(usize, usize),
    AntiDiagonal(usize, usize),
    Point(usize),
}

fn rank_one_kind(p: &LabelledPartition) -> RankOneKind {
    if let Some((_, _, support)) = p.labelled_blocks().into_iter().next() {
        return RankOneKind::Point(support[0]);
    }
    for (rep, _) in p.unlabelled_pairs() {
        let block = &p.raw_blocks()[rep];
        if block.len() == 2 {
            let a = BarredElement::from_code(block[0]);
            let b = BarredElement::from_code(block[1]);
            return if a.barred == b.barred {
                RankOneKind::Diagonal(a.index, b.index)
            } else {
                RankOneKind::AntiDiagonal(a.index, b.index)
            };
        }
    }
    unreachable!("rank-one layer has one non-trivial block pair")
}

pub fn elliptic_d2_degree1(n: usize, family: RootFamily) -> Result<EllipticD2> {
    let space = GroundSpace::new(SpaceKind::Elliptic);
    let domain: Vec<LabelledPartition> = enumerate(family, &space, n, Some(1))
        .into_iter()
        .filter(|s| s.rank() == 1)
        .collect();
    let basis = h2_basis(n);
    let index: HashMap<H2Monomial, usize> =
        basis.iter().copied().enumerate().map(|(i, m)| (m, i)).collect();
    let mut matrix = IMat::zero(basis.len(), domain.len());
    for (col, layer) in domain.iter().enumerate() {
        // [H_ij] = (x_i - x_j)(y_i - y_j), [H'_ij] = (x_i + x_j)(y_i + y_j),
        // [H_i^z] = x_i y_i for every z
        let entries: Vec<(H2Monomial, i64)> = match rank_one_kind(layer) {
            RankOneKind::Diagonal(i, j) => vec![
                (H2Monomial::XY(i, i), 1),
                (H2Monomial::XY(j, j), 1),
                (H2Monomial::XY(i, j), -1),
                (H2Monomial::XY(j, i), -1),
            ],
            RankOneKind::AntiDiagonal(i, j) => vec![
                (H2Monomial::XY(i, i), 1),
                (H2Monomial::XY(j, j), 1),
                (H2Monomial::XY(i, j), 1),
                (H2Monomial::XY(j, i), 1),
            ],
            RankOneKind::Point(i) => vec![(H2Monomial::XY(i, i), 1)],
        };
        for (m, c) in entries {
            matrix[(index[&m], col)] = BigInt::from(c);
        }
    }
    let rank = rank_rational(&matrix);
    let kernel = kernel_basis(&matrix);
    assert_eq!(kernel.len() + rank, domain.len());
    Ok(EllipticD2 { n, family, domain, basis, matrix, rank, kernel })
}

/// Coordinates on an invariant subspace spanned by an explicit basis: pivot
/// rows plus the inverse of the pivot square, so traces come from O(dim^2)
/// work per group element.
struct SubspaceCoords {
    pivots: Vec<usize>,
    inv: Vec<Vec<BigRational>>,
}

fn subspace_coords(basis: &[Vec<BigRational>]) -> SubspaceCoords {
    let kdim = basis.len();
    let rows = basis.first().map_or(0, |b| b.len());
    let mut work: Vec<Vec<BigRational>> =
        (0..rows).map(|r| basis.iter().map(|b| b[r].clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut eliminated = 0usize;
    for r in 0..rows {
        if eliminated == kdim {
            break;
        }
        let Some(col) = (0..kdim).find(|&c| !work[r][c].is_zero()) else { continue };
        pivots.push(r);
        let inv = work[r][col].clone();
        for c in 0..kdim {
            work[r][c] = &work[r][c] / &inv;
        }
        let pivot_row = work[r].clone();
        for (rr, row) in work.iter_mut().enumerate() {
            if rr != r && !row[col].is_zero() {
                let f = row[col].clone();
                for c in 0..kdim {
                    let sub = &f * &pivot_row[c];
                    row[c] -= sub;
                }
            }
        }
        eliminated += 1;
    }
    assert_eq!(eliminated, kdim, "basis vectors must be independent");
    let square: Vec<Vec<BigRational>> =
        pivots.iter().map(|&r| basis.iter().map(|b| b[r].clone()).collect()).collect();
    let inv = invert_matrix(&square);
    SubspaceCoords { pivots, inv }
}

fn invert_matrix(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row = m[i].clone();
            for j in 0..n {
                row.push(if i == j { BigRational::one() } else { BigRational::zero() });
            }
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !aug[r][col].is_zero()).expect("matrix is invertible");
        aug.swap(col, p);
        let inv = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x = &*x / &inv;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for c in 0..2 * n {
                    let sub = &f * &pivot_row[c];
                    row[c] -= sub;
                }
            }
        }
    }
    aug.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// dim H^1 and its character for the elliptic arrangement: E2^{1,0} plus the
/// kernel of the degree-one differential.
pub fn elliptic_h1(n: usize, family: RootFamily) -> Result<(usize, ClassFunction)> {
    let space = GroundSpace::new(SpaceKind::Elliptic);
    let d2 = elliptic_d2_degree1(n, family)?;
    let group = acting_group(family, n);
    let table = char_table(group);
    let e210 = e2_character(1, 0, n, family, &space)?;
    let mut kernel_char = ClassFunction::zero(group);
    if !d2.kernel.is_empty() {
        let coords = subspace_coords(&d2.kernel);
        let dom_index: HashMap<&LabelledPartition, usize> =
            d2.domain.iter().enumerate().map(|(i, p)| (p, i)).collect();
        for (ci, class) in table.classes.iter().enumerate() {
            let w = rep_of_class(class);
            let perm: Vec<usize> = d2
                .domain
                .iter()
                .map(|layer| dom_index[&w.act(layer).expect("same n")])
                .collect();
            // inverse images of the pivot rows
            let kdim = d2.kernel.len();
            let mut tr = BigRational::zero();
            for j in 0..kdim {
                for (m, &pr) in coords.pivots.iter().enumerate() {
                    let i = perm.iter().position(|&x| x == pr).unwrap();
                    if !d2.kernel[j][i].is_zero() && !coords.inv[j][m].is_zero() {
                        tr += &coords.inv[j][m] * &d2.kernel[j][i];
                    }
                }
            }
            kernel_char.values[ci] = tr;
        }
    }
    let h1 = e210.add(&kernel_char)?;
    Ok((h1.dim_usize(), h1))
}

/// The printed degree-one dimension table, per family and space.
pub fn printed_h1_dimension(family: RootFamily, space: SpaceKind, n: usize) -> usize {
    let b = n * (n - 1) / 2;
    match (family, space) {
        (RootFamily::A, SpaceKind::Linear) => b,
        (RootFamily::A, SpaceKind::Toric) => b + n,
        (RootFamily::A, SpaceKind::Elliptic) => 2 * n,
        (RootFamily::B, SpaceKind::Linear) => 2 * b + n,
        (RootFamily::B, SpaceKind::Toric) => 2 * b + 2 * n,
        (RootFamily::B, SpaceKind::Elliptic) => b + 2 * n,
        (RootFamily::C, SpaceKind::Linear) => 2 * b + n,
        (RootFamily::C, SpaceKind::Toric) => 2 * b + 3 * n,
        (RootFamily::C, SpaceKind::Elliptic) => b + 5 * n,
        (RootFamily::D, SpaceKind::Linear) => 2 * b,
        (RootFamily::D, SpaceKind::Toric) => 2 * b + n,
        (RootFamily::D, SpaceKind::Elliptic) => 2 * n,
    }
}

/// The computed type D elliptic dimension departs from the printed table from
/// n = 4 on: the exact kernel rank gives C(n,2) + n instead of 2n.
pub fn h1_discrepancy_note(family: RootFamily, space: SpaceKind, n: usize) -> Option<String> {
    if family == RootFamily::D && space == SpaceKind::Elliptic && n >= 4 {
        Some(format!(
            "computed dim H^1 = C(n,2)+n = {} differs from the printed 2n = {} at n = {n}",
            n * (n - 1) / 2 + n,
            2 * n
        ))
    } else {
        None
    }
}

/// dim H^1 by the implemented route, any space.
pub fn h1_dimension(family: RootFamily, space: &GroundSpace, n: usize) -> Result<usize> {
    match space.kind {
        SpaceKind::Elliptic => Ok(elliptic_h1(n, family)?.0),
        _ => Ok(betti(1, n, family, space)?.0),
    }
}

/// Monomials of the q-axis basis: pairs (i_s, j_s) with i_s > j_s and
/// strictly decreasing i_1 > i_2 > ... > i_q.
fn injectivity_domain(n: usize, q: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut current: Vec<(usize, usize)> = Vec::new();
    fn rec(
        q: usize,
        max_i: usize,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if current.len() == q {
            out.push(current.clone());
            return;
        }
        for i in (2..=max_i).rev() {
            for j in 1..i {
                current.push((i, j));
                rec(q, i - 1, current, out);
                current.pop();
            }
        }
    }
    rec(q, n, &mut current, &mut out);
    out
}

/// Full-column-rank certificate for d: E2^{0,q} -> E2^{2,q-1} in the type A
/// elliptic case, over the monomial bases.
#[derive(Debug, Clone)]
pub struct InjectivityReport {
    pub n: usize,
    pub q: usize,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub rank: usize,
    pub injective: bool,
}

impl InjectivityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "q": self.q,
            "domain_dim": self.domain_dim,
            "codomain_dim": self.codomain_dim,
            "rank": self.rank,
            "injective": self.injective,
        })
    }
}

pub fn type_a_elliptic_injectivity(n: usize, q: usize) -> Result<InjectivityReport> {
    if n < 2 || q < 1 {
        return Err(Error::Range("need n ≥ 2 and q ≥ 1".into()));
    }
    let domain = injectivity_domain(n, q);
    // codomain: z_a z_b · (monomial of length q-1) with a, b outside the
    // i-set of the monomial; symbols ordered x_1 < ... < x_n < y_1 < ... < y_n
    #[derive(PartialEq, Eq, PartialOrd, Ord, Hash, Clone, Debug)]
    struct CodomainIdx {
        za: (bool, usize),
        zb: (bool, usize),
        tail: Vec<(usize, usize)>,
    }
    let tails = injectivity_domain(n, q - 1);
    let mut codomain: Vec<CodomainIdx> = Vec::new();
    for tail in &tails {
        let iset: Vec<usize> = tail.iter().map(|&(i, _)| i).collect();
        let mut symbols: Vec<(bool, usize)> = Vec::new();
        for y in [false, true] {
            for idx in 1..=n {
                if !iset.contains(&idx) {
                    symbols.push((y, idx));
                }
            }
        }
        for a in 0..symbols.len() {
            for b in a + 1..symbols.len() {
                codomain.push(CodomainIdx { za: symbols[a], zb: symbols[b], tail: tail.clone() });
            }
        }
    }
    let codomain_index: HashMap<CodomainIdx, usize> =
        codomain.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let mut matrix = IMat::zero(codomain.len(), domain.len());
    for (col, mono) in domain.iter().enumerate() {
        for s in 0..q {
            let (is, js) = mono[s];
            let tail: Vec<(usize, usize)> = mono
                .iter()
                .enumerate()
                .filter(|&(u, _)| u != s)
                .map(|(_, &pair)| pair)
                .collect();
            let leibniz = if s % 2 == 0 { 1i64 } else { -1 };
            // restrict (x_i - x_j)(y_i - y_j) to the layer of the remaining
            // monomial: replace indices along its identifications
            let reduce = |mut idx: usize| loop {
                match tail.iter().find(|&&(i, _)| i == idx) {
                    Some(&(_, j)) => idx = j,
                    None => return idx,
                }
            };
            for (xi, yi, sign) in [(is, is, 1i64), (js, js, 1), (is, js, -1), (js, is, -1)] {
                let a = (false, reduce(xi));
                let b = (true, reduce(yi));
                // x-symbols sort before y-symbols, so (a, b) is ordered
                let key = CodomainIdx { za: a, zb: b, tail: tail.clone() };
                let row = codomain_index[&key];
                matrix[(row, col)] += BigInt::from(leibniz * sign);
            }
        }
    }
    let rank = rank_rational(&matrix);
    Ok(InjectivityReport {
        n,
        q,
        domain_dim: domain.len(),
        codomain_dim: codomain.len(),
        rank,
        injective: rank == domain.len(),
    })
}

/// Stable name of an irreducible: drop the first part of the padded side.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum StableName {
    S(Vec<usize>),
    W(Vec<usize>, Vec<usize>),
}

impl std::fmt::Display for StableName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[usize]| {
            if v.is_empty() {
                "0".to_string()
            } else {
                v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
            }
        };
        match self {
            StableName::S(l) => write!(f, "V({})", join(l)),
            StableName::W(p, m) => write!(f, "V({}|{})", join(p), join(m)),
        }
    }
}

fn stable_name_of(irr: &IrrId) -> StableName {
    match irr {
        IrrId::S(l) => StableName::S(l.iter().skip(1).copied().collect()),
        IrrId::W(b) => StableName::W(b.plus.iter().skip(1).copied().collect(), b.minus.clone()),
    }
}

/// Whether a stable name names an honest irreducible at size n.
pub fn stable_name_valid(name: &StableName, n: usize) -> bool {
    match name {
        StableName::S(l) => pad_partition(l, n).is_ok(),
        StableName::W(p, m) => pad_bipartition(p, m, n).is_ok(),
    }
}

/// Per-degree stability scan across a window of sizes.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub i: usize,
    pub family: RootFamily,
    pub space: SpaceKind,
    pub n_start: usize,
    pub n_end: usize,
    /// Multiplicity sequence of each stable name across the window.
    pub multiplicities: Vec<(StableName, Vec<usize>)>,
    /// First n from which every sequence is constant through the window end.
    pub onset: usize,
    pub note: String,
    pub predicted_bound: usize,
    pub dims: Vec<usize>,
    pub dim_poly_degree: usize,
    /// Monomial coefficients of the exact polynomial interpolating the
    /// dimensions from the onset on, constant term first.
    pub dim_poly: Vec<BigRational>,
    /// Multiplicity of the trivial representation per n: rational cohomology
    /// of the orbit space.
    pub trivial_multiplicity: Vec<usize>,
}

pub fn stability_scan(
    i: usize,
    family: RootFamily,
    space: &GroundSpace,
    n_start: usize,
    n_end: usize,
) -> Result<StabilityReport> {
    if n_start < 1 || n_end < n_start {
        return Err(Error::Range("empty scan window".into()));
    }
    if space.kind == SpaceKind::Elliptic && i != 1 {
        return Err(Error::Unsupported(
            "elliptic scans are limited to cohomological degree 1".into(),
        ));
    }
    let width = n_end - n_start + 1;
    let mut seqs: BTreeMap<StableName, Vec<usize>> = BTreeMap::new();
    let mut dims = Vec::with_capacity(width);
    let mut trivial = Vec::with_capacity(width);
    for n in n_start..=n_end {
        let (dim, ch) = match space.kind {
            SpaceKind::Elliptic => elliptic_h1(n, family)?,
            _ => betti(i, n, family, space)?,
        };
        dims.push(dim);
        let mut triv_mult = 0;
        for (irr, mult) in ch.decompose()? {
            let name = stable_name_of(&irr);
            debug_assert!(
                stable_name_valid(&name, n),
                "stable name of an irreducible pads back at its own size"
            );
            let is_trivial = match &irr {
                IrrId::S(l) => l.len() <= 1,
                IrrId::W(b) => b.minus.is_empty() && b.plus.len() <= 1,
            };
            if is_trivial {
                triv_mult = mult;
            }
            seqs.entry(name).or_insert_with(|| vec![0; width])[n - n_start] = mult;
        }
        trivial.push(triv_mult);
    }
    let mut onset = n_end;
    'outer: for n0 in n_start..=n_end {
        let idx = n0 - n_start;
        for seq in seqs.values() {
            if !seq[idx..].iter().all(|&m| m == seq[idx]) {
                continue 'outer;
            }
        }
        onset = n0;
        break;
    }
    let predicted_bound = if family == RootFamily::A && space.kind == SpaceKind::Elliptic {
        4 * i - 2
    } else {
        4 * i
    };
    let changing_at_end = onset == n_end && width > 1 && {
        let idx = n_end - 1 - n_start;
        seqs.values().any(|seq| seq[idx] != seq[idx + 1])
    };
    let note = if changing_at_end {
        format!("inconclusive ≥ {n_end}")
    } else if n_end <= predicted_bound {
        format!("onset ≤ {onset} consistent with bound {predicted_bound}")
    } else {
        format!("onset {onset} within bound {predicted_bound}")
    };
    // the dimension polynomial is a statement about the stable sequence, so
    // interpolate the window tail from the onset on
    let (dim_poly_degree, dim_poly) = fit_polynomial(onset, &dims[onset - n_start..]);
    Ok(StabilityReport {
        i,
        family,
        space: space.kind,
        n_start,
        n_end,
        multiplicities: seqs.into_iter().collect(),
        onset,
        note,
        predicted_bound,
        dims,
        dim_poly_degree,
        dim_poly,
        trivial_multiplicity: trivial,
    })
}

impl StabilityReport {
    pub fn mults_of(&self, name: &StableName) -> Option<&[usize]> {
        self.multiplicities
            .iter()
            .find(|(n0, _)| n0 == name)
            .map(|(_, seq)| seq.as_slice())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "i": self.i,
            "family": self.family.name(),
            "space": self.space.name(),
            "n_range": [self.n_start, self.n_end],
            "multiplicities": self
                .multiplicities
                .iter()
                .map(|(name, seq)| serde_json::json!({"name": name.to_string(), "mults": seq}))
                .collect::<Vec<_>>(),
            "onset": self.onset,
            "note": self.note,
            "predicted_bound": self.predicted_bound,
            "dims": self.dims,
            "dim_poly_degree": self.dim_poly_degree,
            "dim_poly": self.dim_poly.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "trivial_multiplicity": self.trivial_multiplicity,
        })
    }
}

/// Exact interpolating polynomial through (start + i, ys\[i\]) by Newton
/// forward differences; returns (degree, monomial coefficients).
pub fn fit_polynomial(start: usize, ys: &[usize]) -> (usize, Vec<BigRational>) {
    let m = ys.len();
    let mut diffs: Vec<Vec<BigRational>> =
        vec![ys.iter().map(|&y| BigRational::from(BigInt::from(y))).collect()];
    while diffs.last().unwrap().len() > 1 {
        let prev = diffs.last().unwrap();
        let next: Vec<BigRational> = prev.windows(2).map(|w| &w[1] - &w[0]).collect();
        diffs.push(next);
    }
    let degree = (0..m).rev().find(|&k| !diffs[k][0].is_zero()).unwrap_or(0);
    // Σ_k Δ^k y(start) / k! · Π_{j<k} (x - start - j)
    let mut coeffs = vec![BigRational::zero(); degree + 1];
    let mut falling = vec![BigRational::one()];
    let mut k_fact = BigInt::one();
    for k in 0..=degree {
        if k > 0 {
            k_fact *= BigInt::from(k);
            let shift = BigRational::from(BigInt::from(start as i64 + k as i64 - 1));
            let mut next = vec![BigRational::zero(); falling.len() + 1];
            for (d, c) in falling.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * &shift;
            }
            falling = next;
        }
        let scale = &diffs[k][0] / BigRational::from(k_fact.clone());
        for (d, c) in falling.iter().enumerate() {
            coeffs[d] += c * &scale;
        }
    }
    // the interpolation must reproduce the data
    for (idx, &y) in ys.iter().enumerate() {
        let x = BigRational::from(BigInt::from((start + idx) as i64));
        let mut acc = BigRational::zero();
        let mut pow = BigRational::one();
        for c in &coeffs {
            acc += c * &pow;
            pow *= &x;
        }
        assert_eq!(acc, BigRational::from(BigInt::from(y)));
    }
    (degree, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::Bipartition;

    fn sp(kind: SpaceKind) -> GroundSpace {
        GroundSpace::new(kind)
    }

    fn parse(s: &str) -> LabelledPartition {
        LabelledPartition::from_json(&serde_json::from_str(s).unwrap()).unwrap()
    }

    #[test]
    fn ambient_trace_examples() {
        let bottom = LabelledPartition::bottom(3);
        let id = SignedPermutation::identity(3);
        // identity on E^3 in degree 1: 2·3
        assert_eq!(ambient_trace(&id, &bottom, 1, &sp(SpaceKind::Elliptic)), 6);
        // single inverted coordinate on the torus: -1 in degree 1
        let b1 = LabelledPartition::bottom(1);
        let flip = SignedPermutation::new(vec![1], vec![-1]).unwrap();
        assert_eq!(ambient_trace(&flip, &b1, 1, &sp(SpaceKind::Toric)), -1);
        // linear factors are contractible
        assert_eq!(ambient_trace(&id, &bottom, 0, &sp(SpaceKind::Linear)), 1);
        assert_eq!(ambient_trace(&id, &bottom, 1, &sp(SpaceKind::Linear)), 0);
    }

    #[test]
    fn ambient_trace_against_brute_force_exterior_model() {
        // H^*((C^×)^n) is the exterior algebra on n degree-one classes; a
        // signed permutation acts there by its matrix. Compare the cycle
        // formula against exterior-power traces (principal minors).
        let n = 3;
        let bottom = LabelledPartition::bottom(n);
        let space = sp(SpaceKind::Toric);
        for w in crate::weyl::all_elements(RootFamily::C, n) {
            let mut m = vec![vec![0i64; n]; n];
            for i in 0..n {
                m[w.image(i)][i] = w.sign(i) as i64;
            }
            for p in 0..=n {
                let idx: Vec<usize> = (0..n).collect();
                let mut total = 0i64;
                for subset in subsets(&idx, p) {
                    total += principal_minor(&m, &subset);
                }
                assert_eq!(ambient_trace(&w, &bottom, p, &space), total, "w = {w}, p = {p}");
            }
        }
    }

    fn subsets(idx: &[usize], k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for (pos, &first) in idx.iter().enumerate() {
            for mut rest in subsets(&idx[pos + 1..], k - 1) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    fn principal_minor(m: &[Vec<i64>], subset: &[usize]) -> i64 {
        det_rows(m, subset, subset)
    }

    fn det_rows(m: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> i64 {
        if rows.is_empty() {
            return 1;
        }
        let mut acc = 0i64;
        for (c, &col) in cols.iter().enumerate() {
            let rest: Vec<usize> =
                cols.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            acc += sign * m[rows[0]][col] * det_rows(m, &rows[1..], &rest);
        }
        acc
    }

    #[test]
    fn local_os_trace_identity_is_dimension() {
        let top = parse(r#"{"n":2,"blocks":[["1","1-","2","2-"]],"labels":{"0":"a"}}"#);
        let id = SignedPermutation::identity(2);
        assert_eq!(local_os_trace(&id, &top, RootFamily::C).unwrap(), 3);
        // the swap fixes H_12 and H'_12 and exchanges the two point layers;
        // on the NBC basis {e0e1, e0e2, e0e3} only the first survives
        let swap = SignedPermutation::new(vec![2, 1], vec![1, 1]).unwrap();
        assert_eq!(local_os_trace(&swap, &top, RootFamily::C).unwrap(), 1);
        let h12 = parse(r#"{"n":2,"blocks":[["1","2"],["1-","2-"]],"labels":{}}"#);
        let swap = SignedPermutation::new(vec![2, 1], vec![1, 1]).unwrap();
        assert_eq!(local_os_trace(&swap, &h12, RootFamily::C).unwrap(), 1);
        let not_stab = SignedPermutation::new(vec![1, 2], vec![-1, 1]).unwrap();
        assert!(local_os_trace(&not_stab, &h12, RootFamily::D).is_err());
    }

    #[test]
    fn e2_10_toric_b2_is_the_reflection_character() {
        let ch = e2_character(1, 0, 2, RootFamily::B, &sp(SpaceKind::Toric)).unwrap();
        let dec = ch.decompose().unwrap();
        assert_eq!(dec.len(), 1);
        assert_eq!(dec[0], (IrrId::W(Bipartition { plus: vec![1], minus: vec![1] }), 1));
    }

    #[test]
    fn e2_01_dimensions() {
        // type C toric: 2·C(n,2) + 2n rank-one layers
        for n in 2..=4 {
            let ch = e2_character(0, 1, n, RootFamily::C, &sp(SpaceKind::Toric)).unwrap();
            assert_eq!(ch.dim_usize(), n * (n - 1) + 2 * n);
        }
        // type A linear: C(n,2)
        for n in 2..=5 {
            let ch = e2_character(0, 1, n, RootFamily::A, &sp(SpaceKind::Linear)).unwrap();
            assert_eq!(ch.dim_usize(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn e2_pieces_match_example_shapes() {
        // (p,q) = (0,1), n = 2, type B toric: two pieces with k = 1 and k = 2
        let pieces = e2_pieces(0, 1, 2, RootFamily::B, &sp(SpaceKind::Toric)).unwrap();
        assert_eq!(pieces.len(), 2);
        let mut ks: Vec<usize> = pieces.iter().map(|p| p.k).collect();
        ks.sort_unstable();
        assert_eq!(ks, vec![1, 2]);
        for piece in &pieces {
            assert_eq!(piece.induced_dim(2), 2);
        }
        // (p,q) = (1,0): a single piece with λ = ∅, r = 0, α = (1), k = 1
        for n in 2..=4 {
            let pieces = e2_pieces(1, 0, n, RootFamily::C, &sp(SpaceKind::Toric)).unwrap();
            assert_eq!(pieces.len(), 1);
            assert_eq!(pieces[0].k, 1);
            assert_eq!(pieces[0].r, 0);
            assert_eq!(pieces[0].alpha, vec![1]);
        }
        // (p,q) = (0,0): the trivial piece
        let pieces = e2_pieces(0, 0, 3, RootFamily::D, &sp(SpaceKind::Elliptic)).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].k, 0);
        assert_eq!(pieces[0].induced_dim(3), 1);
    }

    #[test]
    fn e2_cell_reconciles_dimension_routes() {
        // e2_cell asserts internally that the character dimension equals the
        // ambient-Betti-times-Whitney sum
        for (family, kind, p, q, n) in [
            (RootFamily::C, SpaceKind::Toric, 1, 1, 3),
            (RootFamily::B, SpaceKind::Elliptic, 0, 2, 4),
            (RootFamily::A, SpaceKind::Linear, 0, 2, 4),
            (RootFamily::D, SpaceKind::Toric, 2, 0, 3),
        ] {
            let cell = crate::spectral::e2_cell(p, q, n, family, &sp(kind)).unwrap();
            assert_eq!(cell.dim, cell.character.dim_usize());
            let piece_total: usize = cell.pieces.iter().map(|x| x.induced_dim(n)).sum();
            assert_eq!(piece_total, cell.dim);
        }
    }

    #[test]
    fn deeper_piece_identities() {
        // beyond the p + q ≤ 2 envelope: exercises nonzero r together with
        // nonempty α and labelled λ (the internal assert reconciles the two
        // routes)
        let pieces = e2_pieces(2, 1, 5, RootFamily::C, &sp(SpaceKind::Elliptic)).unwrap();
        assert!(pieces.iter().any(|x| x.r > 0 && !x.alpha.is_empty()));
        assert!(pieces.iter().any(|x| !x.lambda.labelled().is_empty()));
        // a deeper q on the symmetric-group side
        let pieces = e2_pieces(0, 3, 6, RootFamily::A, &sp(SpaceKind::Toric)).unwrap();
        assert!(!pieces.is_empty());
        assert!(pieces.iter().all(|x| x.k <= 6));
    }

    #[test]
    fn betti_examples() {
        let (d, _) = betti(1, 5, RootFamily::A, &sp(SpaceKind::Linear)).unwrap();
        assert_eq!(d, 10);
        let (d, _) = betti(1, 3, RootFamily::C, &sp(SpaceKind::Toric)).unwrap();
        assert_eq!(d, 15);
        let (d, _) = betti(2, 4, RootFamily::A, &sp(SpaceKind::Linear)).unwrap();
        assert_eq!(d, 11);
        assert!(betti(1, 3, RootFamily::A, &sp(SpaceKind::Elliptic)).is_err());
    }

    #[test]
    fn linear_betti_match_reflection_poincare_polynomials() {
        // independent closed forms: Π(1+kt) for the symmetric group,
        // Π(1+(2k-1)t) for the hyperoctahedral one, and
        // Π_{k<n}(1+(2k-1)t)·(1+(n-1)t) for type D
        fn poly_coeffs(factors: &[i64], top: usize) -> Vec<i64> {
            let mut poly = vec![0i64; top + 1];
            poly[0] = 1;
            for &f in factors {
                let mut next = poly.clone();
                for d in (1..=top).rev() {
                    next[d] += f * poly[d - 1];
                }
                poly = next;
            }
            poly
        }
        let sp = GroundSpace::new(SpaceKind::Linear);
        for n in 2..=5usize {
            let a: Vec<i64> = (1..n as i64).collect();
            let b: Vec<i64> = (1..=n as i64).map(|k| 2 * k - 1).collect();
            let mut d: Vec<i64> = (1..n as i64).map(|k| 2 * k - 1).collect();
            d.push(n as i64 - 1);
            let top = 3.min(n);
            let pa = poly_coeffs(&a, top);
            let pb = poly_coeffs(&b, top);
            let pd = poly_coeffs(&d, top);
            for i in 0..=top {
                assert_eq!(
                    betti(i, n, RootFamily::A, &sp).unwrap().0 as i64,
                    pa[i],
                    "A n={n} i={i}"
                );
                assert_eq!(
                    betti(i, n, RootFamily::B, &sp).unwrap().0 as i64,
                    pb[i],
                    "B n={n} i={i}"
                );
                if n >= 2 {
                    assert_eq!(
                        betti(i, n, RootFamily::D, &sp).unwrap().0 as i64,
                        pd[i],
                        "D n={n} i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn toric_type_a_betti_match_punctured_configuration_spaces() {
        // ordered configurations of the punctured plane: Π_{k=1..n}(1+kt)
        let sp = GroundSpace::new(SpaceKind::Toric);
        for n in 1..=4usize {
            let mut poly = vec![0i64; n + 1];
            poly[0] = 1;
            for k in 1..=n as i64 {
                let mut next = poly.clone();
                for d in (1..=n).rev() {
                    next[d] += k * poly[d - 1];
                }
                poly = next;
            }
            for (i, &want) in poly.iter().enumerate() {
                let got = betti(i, n, RootFamily::A, &sp).unwrap().0 as i64;
                assert_eq!(got, want, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn elliptic_h1_table_row() {
        assert_eq!(elliptic_h1(4, RootFamily::A).unwrap().0, 8);
        assert_eq!(elliptic_h1(4, RootFamily::B).unwrap().0, 6 + 8);
        assert_eq!(elliptic_h1(3, RootFamily::C).unwrap().0, 3 + 15);
        // type D: agrees with 2n at n = 2, 3; the computed value departs at 4
        assert_eq!(elliptic_h1(2, RootFamily::D).unwrap().0, 4);
        assert_eq!(elliptic_h1(3, RootFamily::D).unwrap().0, 6);
        assert_eq!(elliptic_h1(4, RootFamily::D).unwrap().0, 10);
        assert!(h1_discrepancy_note(RootFamily::D, SpaceKind::Elliptic, 4).is_some());
        assert!(h1_discrepancy_note(RootFamily::D, SpaceKind::Elliptic, 3).is_none());
    }

    #[test]
    fn d2_is_equivariant() {
        for (family, top) in [(RootFamily::B, 5), (RootFamily::C, 4), (RootFamily::D, 5)] {
            for n in 2..=top {
                let d2 = elliptic_d2_degree1(n, family).unwrap();
                let index: HashMap<H2Monomial, usize> =
                    d2.basis.iter().copied().enumerate().map(|(i, m)| (m, i)).collect();
                for w in crate::weyl::generators(family, n) {
                    let img = |i: usize| w.image(i - 1) + 1;
                    let sgn = |i: usize| w.sign(i - 1) as i64;
                    let mut cod = IMat::zero(d2.basis.len(), d2.basis.len());
                    for (col, m) in d2.basis.iter().enumerate() {
                        let (row, c) = match *m {
                            H2Monomial::XX(i, j) => {
                                let (a, b, s) = sorted2(img(i), img(j));
                                (index[&H2Monomial::XX(a, b)], s * sgn(i) * sgn(j))
                            }
                            H2Monomial::YY(i, j) => {
                                let (a, b, s) = sorted2(img(i), img(j));
                                (index[&H2Monomial::YY(a, b)], s * sgn(i) * sgn(j))
                            }
                            H2Monomial::XY(i, j) => {
                                (index[&H2Monomial::XY(img(i), img(j))], sgn(i) * sgn(j))
                            }
                        };
                        cod[(row, col)] = BigInt::from(c);
                    }
                    let mut dom = IMat::zero(d2.domain.len(), d2.domain.len());
                    for (col, layer) in d2.domain.iter().enumerate() {
                        let moved = w.act(layer).unwrap();
                        let row = d2.domain.iter().position(|l| *l == moved).unwrap();
                        dom[(row, col)] = BigInt::one();
                    }
                    assert_eq!(
                        d2.matrix.mul(&dom),
                        cod.mul(&d2.matrix),
                        "family {family:?}, n = {n}, w = {w}"
                    );
                }
            }
        }
    }

    fn sorted2(a: usize, b: usize) -> (usize, usize, i64) {
        if a < b {
            (a, b, 1)
        } else {
            (b, a, -1)
        }
    }

    #[test]
    fn h2_basis_counts() {
        for n in 1..=5usize {
            let b = n * (n - 1) / 2;
            assert_eq!(h2_basis(n).len(), 2 * b + n * n);
        }
    }

    #[test]
    fn kernel_character_dimension_matches_nullity() {
        for (family, n) in [(RootFamily::B, 3), (RootFamily::C, 2), (RootFamily::D, 4)] {
            let d2 = elliptic_d2_degree1(n, family).unwrap();
            let (dim, ch) = elliptic_h1(n, family).unwrap();
            assert_eq!(dim, 2 * n + d2.kernel.len());
            assert_eq!(ch.dim_usize(), dim);
            ch.decompose().unwrap();
        }
    }

    #[test]
    fn type_a_injectivity_examples() {
        assert!(type_a_elliptic_injectivity(2, 1).unwrap().injective);
        assert!(type_a_elliptic_injectivity(3, 1).unwrap().injective);
        assert!(type_a_elliptic_injectivity(4, 2).unwrap().injective);
        // domain of (n, 1) is the set of pairs
        let r = type_a_elliptic_injectivity(4, 1).unwrap();
        assert_eq!(r.domain_dim, 6);
    }

    #[test]
    fn injectivity_bases_match_e2_dimensions() {
        let space = sp(SpaceKind::Elliptic);
        for (n, q) in [(3usize, 1usize), (4, 2)] {
            let r = type_a_elliptic_injectivity(n, q).unwrap();
            let cod = e2_character(2, q - 1, n, RootFamily::A, &space).unwrap();
            assert_eq!(r.codomain_dim, cod.dim_usize());
            let dom = e2_character(0, q, n, RootFamily::A, &space).unwrap();
            assert_eq!(r.domain_dim, dom.dim_usize());
        }
    }

    #[test]
    fn stability_scan_type_a_linear() {
        let report = stability_scan(1, RootFamily::A, &sp(SpaceKind::Linear), 2, 6).unwrap();
        assert_eq!(report.onset, 4);
        assert_eq!(report.mults_of(&StableName::S(vec![])).unwrap().last(), Some(&1));
        assert_eq!(report.mults_of(&StableName::S(vec![1])).unwrap().last(), Some(&1));
        assert_eq!(report.mults_of(&StableName::S(vec![2])).unwrap().last(), Some(&1));
        assert_eq!(report.dim_poly_degree, 2);
    }

    #[test]
    fn fit_polynomial_examples() {
        let (deg, coeffs) = fit_polynomial(2, &[3, 6, 10, 15, 21]);
        assert_eq!(deg, 2);
        // C(n+1, 2) = n(n+1)/2
        assert_eq!(
            coeffs,
            vec![
                BigRational::zero(),
                BigRational::new(BigInt::one(), BigInt::from(2)),
                BigRational::new(BigInt::one(), BigInt::from(2)),
            ]
        );
        let (deg0, c0) = fit_polynomial(1, &[7, 7, 7]);
        assert_eq!(deg0, 0);
        assert_eq!(c0, vec![BigRational::from(BigInt::from(7))]);
    }
}
