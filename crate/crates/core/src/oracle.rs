//! Independent geometric construction of layers from integer character
//! matrices. Layers are canonical saturated sublattices of Z^n together with
//! the two-torsion values of a basis on the layer; connected components of
//! intersections are found by exhaustive search over two-torsion points and
//! certified against the Smith normal form component count.

use crate::error::{Error, Result};
use crate::ground::{GroundSpace, RootFamily, SpaceKind, Torsion};
use crate::linalg::{express_in_rows, hnf_rows, saturation, snf, IMat};
use crate::partition::LabelledPartition;
use crate::poset::{coordinate_layer, LayerPoset};
use crate::weyl::{generators, SignedPermutation};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeMap, VecDeque};

/// The positive roots of the family, as integer characters on the torus.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub family: RootFamily,
    pub n: usize,
    pub positive_roots: Vec<Vec<i64>>,
}

impl RootDatum {
    pub fn new(family: RootFamily, n: usize) -> RootDatum {
        let mut roots = Vec::new();
        let vec = |entries: &[(usize, i64)]| {
            let mut v = vec![0i64; n];
            for &(i, c) in entries {
                v[i] = c;
            }
            v
        };
        for i in 0..n {
            for j in i + 1..n {
                roots.push(vec(&[(i, 1), (j, -1)]));
                if family != RootFamily::A {
                    roots.push(vec(&[(i, 1), (j, 1)]));
                }
            }
        }
        match family {
            RootFamily::B => {
                for i in 0..n {
                    roots.push(vec(&[(i, 1)]));
                }
            }
            RootFamily::C => {
                for i in 0..n {
                    roots.push(vec(&[(i, 2)]));
                }
            }
            _ => {}
        }
        RootDatum { family, n, positive_roots: roots }
    }
}

/// A layer on the oracle side: the saturated lattice of characters constant
/// on it (HNF basis) with their two-torsion values, plus one witness point.
#[derive(Debug, Clone)]
pub struct GeometricLayer {
    pub n: usize,
    pub lattice: IMat,
    pub values: Vec<Torsion>,
    /// A two-torsion point on the layer. Not part of the identity.
    pub witness: Vec<Torsion>,
}

impl PartialEq for GeometricLayer {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.lattice == other.lattice && self.values == other.values
    }
}
impl Eq for GeometricLayer {}
impl PartialOrd for GeometricLayer {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for GeometricLayer {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.n, &self.lattice, &self.values).cmp(&(&other.n, &other.lattice, &other.values))
    }
}

impl GeometricLayer {
    /// The whole space X^n.
    pub fn ambient(n: usize) -> GeometricLayer {
        GeometricLayer {
            n,
            lattice: IMat::zero(0, n),
            values: vec![],
            witness: vec![Torsion::E; n],
        }
    }

    pub fn rank(&self) -> usize {
        self.lattice.rows
    }

    pub fn dimension(&self) -> usize {
        self.n - self.rank()
    }

    /// Reverse-inclusion order: does this layer contain `other`?
    pub fn contains(&self, other: &GeometricLayer) -> bool {
        assert_eq!(self.n, other.n);
        for i in 0..self.lattice.rows {
            let row = self.lattice.row(i).to_vec();
            let Some(coeffs) = express_in_rows(&other.lattice, &row) else {
                return false;
            };
            let mut val = Torsion::E;
            for (j, c) in coeffs.iter().enumerate() {
                if !(c % BigInt::from(2)).is_zero() {
                    val = val.compose(other.values[j]);
                }
            }
            if val != self.values[i] {
                return false;
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "lattice": self.lattice.to_json(),
            "offset": self.witness.iter().map(|z| z.name()).collect::<Vec<_>>(),
        })
    }
}

/// The scan-minimal two-torsion point with the given basis values; the
/// canonical coset representative carried in serialized output. Scanning the
/// full four-element grid is sound for every space: evaluation splits over
/// the bit planes, so the minimum never uses bits absent from the values.
fn canonical_witness(lattice: &IMat, values: &[Torsion], n: usize) -> Vec<Torsion> {
    let mut point = vec![Torsion::E; n];
    loop {
        if (0..lattice.rows).all(|i| eval_at(lattice.row(i), &point) == values[i]) {
            return point;
        }
        let mut carry = true;
        for slot in point.iter_mut() {
            let next = (slot.0 as usize + 1) % 4;
            *slot = Torsion(next as u8);
            if next != 0 {
                carry = false;
                break;
            }
        }
        assert!(!carry, "layer values admit a two-torsion point");
    }
}

/// Evaluate an integer character at a two-torsion point.
fn eval_at(chi: &[BigInt], x: &[Torsion]) -> Torsion {
    let mut acc = Torsion::E;
    for (c, z) in chi.iter().zip(x) {
        if !(c % BigInt::from(2)).is_zero() {
            acc = acc.compose(*z);
        }
    }
    acc
}

fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| num_integer::Integer::gcd(&g, &x))
}

/// Connected components of the intersection of the given subvarieties. Each
/// input is a root character with a two-torsion translate, cutting out
/// {χ/content = τ}; for a content-two root these are exactly the connected
/// components of its kernel, indexed by X\[2\]. Inconsistent constraints yield
/// the empty list. The number of nonempty components is certified against
/// the torsion of the cokernel of the stacked character matrix.
pub fn components_of(
    constraints: &[(Vec<i64>, Torsion)],
    space: &GroundSpace,
    n: usize,
) -> Result<Vec<GeometricLayer>> {
    let mut prim_rows: Vec<Vec<BigInt>> = Vec::new();
    let mut targets: Vec<Torsion> = Vec::new();
    for (root, z) in constraints {
        if root.len() != n {
            return Err(Error::SizeMismatch("root vector length != n".into()));
        }
        if !space.contains(*z) {
            return Err(Error::Invalid("component index outside X[2]".into()));
        }
        let d = content(root).abs();
        if d == 0 {
            if z.is_identity() {
                continue; // zero character: no constraint
            }
            return Ok(vec![]);
        }
        if d > 2 {
            return Err(Error::Unsupported(
                "components of kernels with content > 2 do not have two-torsion translates".into(),
            ));
        }
        prim_rows.push(root.iter().map(|&c| BigInt::from(c / d)).collect());
        targets.push(*z);
    }
    if space.kind == SpaceKind::Linear {
        // every subvariety passes through the origin
        let m = IMat::from_rows_n(prim_rows, n);
        let sat = saturation(&m);
        let rows = sat.rows;
        return Ok(vec![GeometricLayer {
            n,
            lattice: sat,
            values: vec![Torsion::E; rows],
            witness: vec![Torsion::E; n],
        }]);
    }

    let m = IMat::from_rows_n(prim_rows.clone(), n);
    let sat = saturation(&m);
    let expected = {
        let t = snf(&m).torsion_order();
        let t = t.to_usize().expect("torsion order fits usize");
        t.pow(space.torsion_rank() as u32)
    };

    // exhaustive search over X[2]^n, grouped by the values of the saturated
    // basis (constant on each connected component)
    let order = space.torsion_order();
    let mut found: BTreeMap<Vec<Torsion>, Vec<Torsion>> = BTreeMap::new();
    let mut point = vec![Torsion::E; n];
    loop {
        let ok = prim_rows
            .iter()
            .zip(&targets)
            .all(|(chi, t)| eval_at(chi, &point) == *t);
        if ok {
            let key: Vec<Torsion> =
                (0..sat.rows).map(|i| eval_at(sat.row(i), &point)).collect();
            found.entry(key).or_insert_with(|| point.clone());
        }
        // odometer over X[2]^n
        let mut carry = true;
        for slot in point.iter_mut() {
            let next = (slot.0 as usize + 1) % order;
            *slot = Torsion(next as u8);
            if next != 0 {
                carry = false;
                break;
            }
        }
        if carry {
            break;
        }
    }

    if !found.is_empty() {
        assert_eq!(
            found.len(),
            expected,
            "component count disagrees with the SNF torsion certificate"
        );
    }
    Ok(found
        .into_iter()
        .map(|(values, witness)| GeometricLayer { n, lattice: sat.clone(), values, witness })
        .collect())
}

/// The action of a signed permutation on a geometric layer: transform the
/// character lattice and re-evaluate the basis on the moved witness.
pub fn act_geo(w: &SignedPermutation, layer: &GeometricLayer) -> GeometricLayer {
    let n = layer.n;
    assert_eq!(w.n(), n);
    // character pullback along w^{-1}: (w·λ)_{σ(i)} = ε_i λ_i
    let rows: Vec<Vec<BigInt>> = (0..layer.lattice.rows)
        .map(|r| {
            let mut v = vec![BigInt::zero(); n];
            for i in 0..n {
                let c = layer.lattice[(r, i)].clone();
                v[w.image(i)] = if w.sign(i) < 0 { -c } else { c };
            }
            v
        })
        .collect();
    let lattice = hnf_rows(&IMat::from_rows_n(rows, n));
    let mut moved = vec![Torsion::E; n];
    for i in 0..n {
        moved[w.image(i)] = layer.witness[i]; // inversion fixes X[2]
    }
    let values: Vec<Torsion> =
        (0..lattice.rows).map(|i| eval_at(lattice.row(i), &moved)).collect();
    let witness = canonical_witness(&lattice, &values, n);
    GeometricLayer { n, lattice, values, witness }
}

/// Poset of layers built on the oracle side, shaped like the combinatorial
/// one: closure of the arrangement under intersection-and-split.
#[derive(Debug, Clone)]
pub struct GeometricPoset {
    pub family: RootFamily,
    pub space: GroundSpace,
    pub n: usize,
    pub layers: Vec<GeometricLayer>,
    pub rank_of: Vec<usize>,
    pub covers: Vec<(usize, usize)>,
    pub bottom: usize,
}

impl GeometricPoset {
    pub fn rank_counts(&self) -> Vec<usize> {
        let top = self.rank_of.iter().copied().max().unwrap_or(0);
        let mut counts = vec![0; top + 1];
        for &r in &self.rank_of {
            counts[r] += 1;
        }
        counts
    }

    pub fn index_of(&self, l: &GeometricLayer) -> Option<usize> {
        self.layers.iter().position(|x| x == l)
    }

    /// Reverse inclusion: a ≤ b iff the layer of a contains the layer of b.
    pub fn leq_idx(&self, a: usize, b: usize) -> bool {
        self.layers[a].contains(&self.layers[b])
    }
}

/// The rank-one layers of the arrangement: components of each root kernel.
pub fn arrangement_atoms(
    family: RootFamily,
    space: &GroundSpace,
    n: usize,
) -> Result<Vec<GeometricLayer>> {
    let datum = RootDatum::new(family, n);
    let mut atoms = Vec::new();
    for root in &datum.positive_roots {
        let d = content(root).abs();
        let indices: Vec<Torsion> = if d == 2 {
            space.torsion_elements()
        } else {
            vec![Torsion::E]
        };
        for z in indices {
            atoms.extend(components_of(&[(root.clone(), z)], space, n)?);
        }
    }
    atoms.sort();
    atoms.dedup();
    Ok(atoms)
}

/// Closure of the arrangement's subvarieties under intersection and splitting
/// into connected components, deduplicated by canonical form.
pub fn geometric_layer_poset(
    family: RootFamily,
    space: &GroundSpace,
    n: usize,
    max_rank: Option<usize>,
) -> Result<GeometricPoset> {
    let cap = max_rank.unwrap_or(n);
    let atoms = arrangement_atoms(family, space, n)?;
    let bottom_layer = GeometricLayer::ambient(n);
    let mut known: BTreeMap<GeometricLayer, ()> = BTreeMap::new();
    known.insert(bottom_layer.clone(), ());
    let mut queue: VecDeque<GeometricLayer> = VecDeque::new();
    queue.push_back(bottom_layer);
    while let Some(layer) = queue.pop_front() {
        for atom in &atoms {
            let mut constraints: Vec<(Vec<i64>, Torsion)> = Vec::new();
            for (src, vals) in [(&layer, &layer.values), (atom, &atom.values)] {
                for i in 0..src.lattice.rows {
                    let row: Vec<i64> = src
                        .lattice
                        .row(i)
                        .iter()
                        .map(|x| x.to_i64().expect("small characters"))
                        .collect();
                    constraints.push((row, vals[i]));
                }
            }
            for comp in components_of(&constraints, space, n)? {
                if comp.rank() <= cap && !known.contains_key(&comp) {
                    known.insert(comp.clone(), ());
                    queue.push_back(comp);
                }
            }
        }
    }
    let layers: Vec<GeometricLayer> = known.into_keys().collect();
    let rank_of: Vec<usize> = layers.iter().map(|l| l.rank()).collect();
    let bottom = layers.iter().position(|l| l.rank() == 0).expect("ambient layer");
    let top = rank_of.iter().copied().max().unwrap_or(0);
    let mut by_rank: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for (i, &r) in rank_of.iter().enumerate() {
        by_rank[r].push(i);
    }
    let mut covers = Vec::new();
    for r in 0..top {
        for &lo in &by_rank[r] {
            for &hi in &by_rank[r + 1] {
                if layers[lo].contains(&layers[hi]) {
                    covers.push((lo, hi));
                }
            }
        }
    }
    Ok(GeometricPoset { family, space: *space, n, layers, rank_of, covers, bottom })
}

/// F_Σ on the oracle side: stack the identification characters of the
/// coordinate description and canonicalize.
pub fn layer_of_partition(p: &LabelledPartition) -> GeometricLayer {
    let n = p.n();
    let coord = coordinate_layer(p);
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut witness = vec![Torsion::E; n];
    for pat in &coord.pairs {
        let all: Vec<(usize, i64)> = pat
            .plus
            .iter()
            .map(|&i| (i - 1, 1i64))
            .chain(pat.minus.iter().map(|&i| (i - 1, -1i64)))
            .collect();
        // difference of consecutive members in the sign pattern
        let (i0, s0) = all[0];
        for &(i, s) in &all[1..] {
            let mut v = vec![BigInt::zero(); n];
            v[i0] = BigInt::from(s0);
            v[i] = BigInt::from(-s);
            rows.push(v);
        }
    }
    for (support, z) in &coord.constants {
        for &i in support {
            let mut v = vec![BigInt::zero(); n];
            v[i - 1] = BigInt::from(1);
            rows.push(v);
            witness[i - 1] = *z;
        }
    }
    let lattice = if rows.is_empty() {
        IMat::zero(0, n)
    } else {
        saturation(&IMat::from_rows(rows))
    };
    let values: Vec<Torsion> =
        (0..lattice.rows).map(|i| eval_at(lattice.row(i), &witness)).collect();
    let witness = canonical_witness(&lattice, &values, n);
    GeometricLayer { n, lattice, values, witness }
}

/// Outcome of the equivariant ranked-poset comparison.
#[derive(Debug, Clone)]
pub struct LayerModelReport {
    pub family: RootFamily,
    pub space: SpaceKind,
    pub n: usize,
    pub max_rank: Option<usize>,
    pub pass: bool,
    pub combinatorial_size: usize,
    pub geometric_size: usize,
    pub detail: String,
}

impl LayerModelReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family.name(),
            "space": self.space.name(),
            "n": self.n,
            "max_rank": self.max_rank,
            "pass": self.pass,
            "combinatorial_size": self.combinatorial_size,
            "geometric_size": self.geometric_size,
            "detail": self.detail,
        })
    }
}

/// Check that Σ ↦ F_Σ is a rank-preserving order isomorphism commuting with
/// the group generators. Failure is reported as data, not an error.
pub fn verify_layer_model(
    family: RootFamily,
    space: &GroundSpace,
    n: usize,
    max_rank: Option<usize>,
) -> Result<LayerModelReport> {
    let comb = LayerPoset::build(family, space, n, max_rank);
    let geo = geometric_layer_poset(family, space, n, max_rank)?;
    let mut report = LayerModelReport {
        family,
        space: space.kind,
        n,
        max_rank,
        pass: false,
        combinatorial_size: comb.len(),
        geometric_size: geo.layers.len(),
        detail: String::new(),
    };
    let fail = |mut r: LayerModelReport, d: String| {
        r.detail = d;
        r
    };
    if comb.len() != geo.layers.len() {
        return Ok(fail(report, "element counts differ".into()));
    }
    let mut image: Vec<usize> = Vec::with_capacity(comb.len());
    for p in &comb.elements {
        let f = layer_of_partition(p);
        match geo.index_of(&f) {
            Some(i) => image.push(i),
            None => return Ok(fail(report, format!("F_Σ missing for Σ = {p}"))),
        }
    }
    {
        let mut seen = vec![false; geo.layers.len()];
        for &i in &image {
            if seen[i] {
                return Ok(fail(report, "Σ ↦ F_Σ is not injective".into()));
            }
            seen[i] = true;
        }
    }
    for (i, p) in comb.elements.iter().enumerate() {
        if p.rank() != geo.rank_of[image[i]] {
            return Ok(fail(report, format!("rank mismatch at Σ = {p}")));
        }
    }
    for a in 0..comb.len() {
        for b in 0..comb.len() {
            let lhs = comb.leq_idx(a, b);
            let rhs = geo.leq_idx(image[a], image[b]);
            if lhs != rhs {
                return Ok(fail(
                    report,
                    format!(
                        "order mismatch: {} vs {} ({} / {})",
                        comb.elements[a], comb.elements[b], lhs, rhs
                    ),
                ));
            }
        }
    }
    for w in generators(family, n) {
        for (i, p) in comb.elements.iter().enumerate() {
            let lhs = layer_of_partition(&w.act(p)?);
            let rhs = act_geo(&w, &geo.layers[image[i]]);
            if lhs != rhs {
                return Ok(fail(report, format!("equivariance fails at Σ = {p}, w = {w}")));
            }
        }
    }
    report.pass = true;
    report.detail = "equivariant ranked-poset isomorphism".into();
    Ok(report)
}
