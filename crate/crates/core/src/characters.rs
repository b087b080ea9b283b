//! Exact character theory for the symmetric and hyperoctahedral groups:
//! irreducible characters, class sizes, induction from parabolic subgroups,
//! inner products, decomposition into irreducibles, and stable-name padding.
//!
//! W_n irreducibles are built by the Clifford route: for a bipartition
//! (λ+, λ-), inflate χ_{λ+} through the sign-forgetting quotient, tensor
//! χ_{λ-} with the product-of-signs linear character, and induce from
//! W_{|λ+|} × W_{|λ-|}. All arithmetic is exact rational.

use crate::combin::partitions_of;
use crate::error::{Error, Result};
use crate::weyl::{SignedCycleType, SignedPermutation};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub type Partition = Vec<usize>;

/// Pair of partitions indexing W_n classes and irreducibles.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bipartition {
    pub plus: Partition,
    pub minus: Partition,
}

impl Bipartition {
    pub fn total(&self) -> usize {
        self.plus.iter().sum::<usize>() + self.minus.iter().sum::<usize>()
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join =
            |v: &[usize]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({}|{})", join(&self.plus), join(&self.minus))
    }
}

/// Bipartitions of n: sorted by (|minus|, plus, minus) with partitions in
/// first-part-descending order. Fixed across the crate for serialization.
pub fn bipartitions_of(n: usize) -> Vec<Bipartition> {
    let mut out = Vec::new();
    for k in 0..=n {
        for plus in partitions_of(n - k) {
            for minus in partitions_of(k) {
                out.push(Bipartition { plus: plus.clone(), minus });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    S(usize),
    W(usize),
}

impl Group {
    pub fn n(self) -> usize {
        match self {
            Group::S(n) | Group::W(n) => n,
        }
    }

    pub fn order(self) -> BigInt {
        let n = self.n();
        let fact: BigInt = (1..=n).map(BigInt::from).product();
        match self {
            Group::S(_) => fact,
            Group::W(_) => fact << n,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Group::S(_) => "S",
            Group::W(_) => "W",
        }
    }
}

/// Conjugacy class index: a partition for S_n, a signed cycle type for W_n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassId {
    S(Partition),
    W(SignedCycleType),
}

impl ClassId {
    /// Class key grammar: `(parts)` for S, `(plus|minus)` for W, parts
    /// comma-separated.
    pub fn key(&self) -> String {
        let join =
            |v: &[usize]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        match self {
            ClassId::S(mu) => format!("({})", join(mu)),
            ClassId::W(c) => format!("({}|{})", join(&c.pos), join(&c.neg)),
        }
    }

    pub fn parse(group: Group, s: &str) -> Result<ClassId> {
        let bad = || Error::Invalid(format!("bad class key `{s}`"));
        let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let parse_parts = |t: &str| -> Result<Vec<usize>> {
            if t.is_empty() {
                return Ok(vec![]);
            }
            t.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect()
        };
        match group {
            Group::S(_) => Ok(ClassId::S(parse_parts(inner)?)),
            Group::W(_) => {
                let (p, m) = inner.split_once('|').ok_or_else(bad)?;
                Ok(ClassId::W(SignedCycleType { pos: parse_parts(p)?, neg: parse_parts(m)? }))
            }
        }
    }
}

/// Irreducible index: a partition for S_n, a bipartition for W_n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IrrId {
    S(Partition),
    W(Bipartition),
}

impl std::fmt::Display for IrrId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IrrId::S(p) => {
                let join =
                    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                write!(f, "({join})")
            }
            IrrId::W(b) => write!(f, "{b}"),
        }
    }
}

/// Centralizer order ∏ l^{m_l} m_l! of a cycle type.
fn z_s(mu: &[usize]) -> BigInt {
    let mut mult: HashMap<usize, usize> = HashMap::new();
    for &l in mu {
        *mult.entry(l).or_insert(0) += 1;
    }
    let mut keys: Vec<_> = mult.into_iter().collect();
    keys.sort();
    let mut z = BigInt::one();
    for (l, m) in keys {
        for _ in 0..m {
            z *= BigInt::from(l);
        }
        for i in 1..=m {
            z *= BigInt::from(i);
        }
    }
    z
}

/// Centralizer order of a signed cycle type: product over cycle groups of
/// (2·len)^mult · mult!.
fn z_w(c: &SignedCycleType) -> BigInt {
    let mut z = BigInt::one();
    for part in [&c.pos, &c.neg] {
        let mut mult: HashMap<usize, usize> = HashMap::new();
        for &l in part.iter() {
            *mult.entry(l).or_insert(0) += 1;
        }
        let mut keys: Vec<_> = mult.into_iter().collect();
        keys.sort();
        for (l, m) in keys {
            for _ in 0..m {
                z *= BigInt::from(2 * l);
            }
            for i in 1..=m {
                z *= BigInt::from(i);
            }
        }
    }
    z
}

pub fn class_size(group: Group, class: &ClassId) -> BigInt {
    match (group, class) {
        (Group::S(_), ClassId::S(mu)) => group.order() / z_s(mu),
        (Group::W(_), ClassId::W(c)) => group.order() / z_w(c),
        _ => panic!("class does not belong to the group"),
    }
}

/// Murnaghan–Nakayama value χ_λ(μ), computed on beta sets with memoization.
pub fn sn_irr_char(lambda: &[usize], mu: &[usize]) -> Result<i64> {
    let nl: usize = lambda.iter().sum();
    let nm: usize = mu.iter().sum();
    if nl != nm {
        return Err(Error::SizeMismatch(format!("|λ| = {nl} but |μ| = {nm}")));
    }
    type MnMemo = Mutex<HashMap<(Vec<usize>, Vec<usize>), i64>>;
    static MEMO: OnceLock<MnMemo> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    fn mn(lambda: &[usize], mu: &[usize], memo: &MnMemo) -> i64 {
        if mu.is_empty() {
            return 1;
        }
        let key = (lambda.to_vec(), mu.to_vec());
        if let Some(&v) = memo.lock().unwrap().get(&key) {
            return v;
        }
        let r = mu[0];
        let rest = &mu[1..];
        let ell = lambda.len();
        let beta: Vec<i64> =
            lambda.iter().enumerate().map(|(i, &p)| (p + ell - 1 - i) as i64).collect();
        let mut total = 0i64;
        for j in 0..ell {
            let b = beta[j] - r as i64;
            if b < 0 || beta.contains(&b) {
                continue;
            }
            // height = number of beta entries strictly between b and beta[j]
            let h = beta.iter().filter(|&&x| b < x && x < beta[j]).count();
            let mut nb = beta.clone();
            nb[j] = b;
            nb.sort_unstable_by(|a, c| c.cmp(a));
            let mut nl: Vec<usize> = nb
                .iter()
                .enumerate()
                .map(|(i, &x)| (x - (ell - 1 - i) as i64) as usize)
                .collect();
            while nl.last() == Some(&0) {
                nl.pop();
            }
            let sign = if h % 2 == 0 { 1 } else { -1 };
            total += sign * mn(&nl, rest, memo);
        }
        memo.lock().unwrap().insert(key, total);
        total
    }
    Ok(mn(lambda, mu, memo))
}

/// Split a signed cycle type into ordered pairs (c1, c2) with |c1| = a,
/// enumerated deterministically over cycle groups.
fn splittings_w(c: &SignedCycleType, a: usize) -> Vec<(SignedCycleType, SignedCycleType)> {
    let mut groups: Vec<((usize, bool), usize)> = Vec::new();
    for (parts, neg) in [(&c.pos, false), (&c.neg, true)] {
        let mut mult: HashMap<usize, usize> = HashMap::new();
        for &l in parts.iter() {
            *mult.entry(l).or_insert(0) += 1;
        }
        let mut keys: Vec<_> = mult.into_iter().collect();
        keys.sort();
        for (l, m) in keys {
            groups.push(((l, neg), m));
        }
    }
    let mut out = Vec::new();
    let mut take: Vec<usize> = vec![0; groups.len()];
    fn rec(
        groups: &[((usize, bool), usize)],
        idx: usize,
        remaining: usize,
        take: &mut Vec<usize>,
        out: &mut Vec<(SignedCycleType, SignedCycleType)>,
    ) {
        if idx == groups.len() {
            if remaining != 0 {
                return;
            }
            let mut c1 = SignedCycleType { pos: vec![], neg: vec![] };
            let mut c2 = SignedCycleType { pos: vec![], neg: vec![] };
            for (g, &t) in groups.iter().zip(take.iter()) {
                let ((l, neg), m) = *g;
                for _ in 0..t {
                    if neg {
                        c1.neg.push(l);
                    } else {
                        c1.pos.push(l);
                    }
                }
                for _ in 0..(m - t) {
                    if neg {
                        c2.neg.push(l);
                    } else {
                        c2.pos.push(l);
                    }
                }
            }
            for v in [&mut c1.pos, &mut c1.neg, &mut c2.pos, &mut c2.neg] {
                v.sort_unstable_by(|a, b| b.cmp(a));
            }
            out.push((c1, c2));
            return;
        }
        let ((l, _), m) = groups[idx];
        for t in 0..=m {
            if t * l > remaining {
                break;
            }
            take[idx] = t;
            rec(groups, idx + 1, remaining - t * l, take, out);
        }
        take[idx] = 0;
    }
    rec(&groups, 0, a, &mut take, &mut out);
    out
}

fn splittings_s(mu: &[usize], a: usize) -> Vec<(Partition, Partition)> {
    let c = SignedCycleType { pos: mu.to_vec(), neg: vec![] };
    splittings_w(&c, a).into_iter().map(|(c1, c2)| (c1.pos, c2.pos)).collect()
}

fn merged_lengths(c: &SignedCycleType) -> Partition {
    let mut v: Vec<usize> = c.pos.iter().chain(c.neg.iter()).copied().collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Irreducible W_n character value at a signed cycle type, by the Clifford
/// construction. Integer-valued.
pub fn wn_irr_char(lambda: &Bipartition, c: &SignedCycleType) -> Result<i64> {
    let n = lambda.total();
    if c.total() != n {
        return Err(Error::SizeMismatch(format!(
            "bipartition of {n} evaluated at a class of {}",
            c.total()
        )));
    }
    let a: usize = lambda.plus.iter().sum();
    let zc = BigRational::from(z_w(c));
    let mut total = BigRational::zero();
    for (c1, c2) in splittings_w(c, a) {
        let phi1 = sn_irr_char(&lambda.plus, &merged_lengths(&c1))?;
        let phi2 = sn_irr_char(&lambda.minus, &merged_lengths(&c2))?;
        let sign = if c2.neg.len() % 2 == 0 { 1 } else { -1 };
        let term = BigRational::from(BigInt::from(phi1 * phi2 * sign))
            / BigRational::from(z_w(&c1) * z_w(&c2));
        total += term;
    }
    total *= &zc;
    debug_assert!(total.is_integer(), "W character value must be an integer");
    total
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Range("character value overflows i64".into()))
}

/// Full character table for a group, cached per (kind, n) and optionally
/// persisted under `ARR_STAB_CACHE_DIR`.
#[derive(Debug)]
pub struct CharTable {
    pub group: Group,
    pub classes: Vec<ClassId>,
    pub class_sizes: Vec<BigInt>,
    pub irreducibles: Vec<IrrId>,
    /// `values[irr][class]`
    pub values: Vec<Vec<BigRational>>,
    class_pos: HashMap<ClassId, usize>,
    pub identity_class: usize,
}

impl CharTable {
    pub fn class_index(&self, c: &ClassId) -> Option<usize> {
        self.class_pos.get(c).copied()
    }

    pub fn irr_row(&self, id: &IrrId) -> Option<&[BigRational]> {
        let i = self.irreducibles.iter().position(|x| x == id)?;
        Some(&self.values[i])
    }
}

static TABLE_CACHE: OnceLock<Mutex<HashMap<Group, Arc<CharTable>>>> = OnceLock::new();

pub fn char_table(group: Group) -> Arc<CharTable> {
    let cache = TABLE_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&group) {
        return Arc::clone(t);
    }
    let table = Arc::new(build_table(group));
    cache.lock().unwrap().entry(group).or_insert_with(|| Arc::clone(&table));
    table
}

fn cache_file(group: Group) -> Option<std::path::PathBuf> {
    let dir = std::env::var_os("ARR_STAB_CACHE_DIR")?;
    let name = format!("{}{}_table.json", group.name().to_lowercase(), group.n());
    Some(std::path::PathBuf::from(dir).join(name))
}

fn build_table(group: Group) -> CharTable {
    if let Some(path) = cache_file(group) {
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Some(t) = parse_table_json(group, &text) {
                return t;
            }
        }
    }
    let t = compute_table(group);
    if let Some(path) = cache_file(group) {
        let _ = std::fs::create_dir_all(path.parent().unwrap());
        let _ = std::fs::write(&path, table_json(&t).to_string());
    }
    t
}

fn compute_table(group: Group) -> CharTable {
    let n = group.n();
    let (classes, irreducibles): (Vec<ClassId>, Vec<IrrId>) = match group {
        Group::S(_) => (
            partitions_of(n).into_iter().map(ClassId::S).collect(),
            partitions_of(n).into_iter().map(IrrId::S).collect(),
        ),
        Group::W(_) => (
            bipartitions_of(n)
                .into_iter()
                .map(|b| ClassId::W(SignedCycleType { pos: b.plus, neg: b.minus }))
                .collect(),
            bipartitions_of(n).into_iter().map(IrrId::W).collect(),
        ),
    };
    let class_sizes: Vec<BigInt> = classes.iter().map(|c| class_size(group, c)).collect();
    let mut values = Vec::with_capacity(irreducibles.len());
    for irr in &irreducibles {
        let mut row = Vec::with_capacity(classes.len());
        for class in &classes {
            let v = match (irr, class) {
                (IrrId::S(l), ClassId::S(mu)) => sn_irr_char(l, mu).expect("same n"),
                (IrrId::W(l), ClassId::W(c)) => wn_irr_char(l, c).expect("same n"),
                _ => unreachable!(),
            };
            row.push(BigRational::from(BigInt::from(v)));
        }
        values.push(row);
    }
    let class_pos: HashMap<ClassId, usize> =
        classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let identity = match group {
        Group::S(_) => ClassId::S(vec![1; n]),
        Group::W(_) => ClassId::W(SignedCycleType { pos: vec![1; n], neg: vec![] }),
    };
    let identity_class = class_pos[&identity];
    CharTable { group, classes, class_sizes, irreducibles, values, class_pos, identity_class }
}

fn table_json(t: &CharTable) -> serde_json::Value {
    serde_json::json!({
        "group": t.group.name(),
        "n": t.group.n(),
        "classes": t.classes.iter().map(|c| c.key()).collect::<Vec<_>>(),
        "values": t
            .values
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

fn parse_table_json(group: Group, text: &str) -> Option<CharTable> {
    let v: serde_json::Value = serde_json::from_str(text).ok()?;
    if v.get("group")?.as_str()? != group.name() || v.get("n")?.as_u64()? as usize != group.n() {
        return None;
    }
    let fresh = compute_table_skeleton(group);
    let keys: Vec<String> = fresh.classes.iter().map(|c| c.key()).collect();
    let stored: Vec<String> =
        v.get("classes")?.as_array()?.iter().map(|x| x.as_str().unwrap_or("").to_string()).collect();
    if keys != stored {
        return None;
    }
    let mut values = Vec::new();
    for row in v.get("values")?.as_array()? {
        let mut out_row = Vec::new();
        for cell in row.as_array()? {
            let s = cell.as_str()?;
            out_row.push(s.parse::<BigRational>().ok()?);
        }
        if out_row.len() != keys.len() {
            return None;
        }
        values.push(out_row);
    }
    if values.len() != fresh.irreducibles.len() {
        return None;
    }
    Some(CharTable { values, ..fresh })
}

/// Table with everything but the values filled in.
fn compute_table_skeleton(group: Group) -> CharTable {
    let n = group.n();
    let (classes, irreducibles): (Vec<ClassId>, Vec<IrrId>) = match group {
        Group::S(_) => (
            partitions_of(n).into_iter().map(ClassId::S).collect(),
            partitions_of(n).into_iter().map(IrrId::S).collect(),
        ),
        Group::W(_) => (
            bipartitions_of(n)
                .into_iter()
                .map(|b| ClassId::W(SignedCycleType { pos: b.plus, neg: b.minus }))
                .collect(),
            bipartitions_of(n).into_iter().map(IrrId::W).collect(),
        ),
    };
    let class_sizes: Vec<BigInt> = classes.iter().map(|c| class_size(group, c)).collect();
    let class_pos: HashMap<ClassId, usize> =
        classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let identity = match group {
        Group::S(_) => ClassId::S(vec![1; n]),
        Group::W(_) => ClassId::W(SignedCycleType { pos: vec![1; n], neg: vec![] }),
    };
    let identity_class = class_pos[&identity];
    CharTable {
        group,
        classes,
        class_sizes,
        irreducibles,
        values: vec![],
        class_pos,
        identity_class,
    }
}

/// An exact class function: one rational value per conjugacy class, in the
/// canonical class order of the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    pub group: Group,
    pub values: Vec<BigRational>,
}

impl ClassFunction {
    pub fn zero(group: Group) -> ClassFunction {
        let k = char_table(group).classes.len();
        ClassFunction { group, values: vec![BigRational::zero(); k] }
    }

    pub fn trivial(group: Group) -> ClassFunction {
        let k = char_table(group).classes.len();
        ClassFunction { group, values: vec![BigRational::one(); k] }
    }

    pub fn irreducible(group: Group, id: &IrrId) -> ClassFunction {
        let t = char_table(group);
        let row = t.irr_row(id).expect("irreducible belongs to the group");
        ClassFunction { group, values: row.to_vec() }
    }

    pub fn dim(&self) -> BigRational {
        let t = char_table(self.group);
        self.values[t.identity_class].clone()
    }

    pub fn dim_usize(&self) -> usize {
        let d = self.dim();
        assert!(d.is_integer() && !d.is_negative());
        d.to_integer().to_usize().expect("dimension fits usize")
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product: the character of a tensor product.
    pub fn mul(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.zip(other, |a, b| a * b)
    }

    fn zip(
        &self,
        other: &ClassFunction,
        f: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Result<ClassFunction> {
        if self.group != other.group {
            return Err(Error::SizeMismatch("class functions on different groups".into()));
        }
        let values =
            self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        Ok(ClassFunction { group: self.group, values })
    }

    pub fn scale(&self, k: i64) -> ClassFunction {
        let k = BigRational::from(BigInt::from(k));
        ClassFunction {
            group: self.group,
            values: self.values.iter().map(|v| v * &k).collect(),
        }
    }

    pub fn value_at(&self, class: &ClassId) -> Option<&BigRational> {
        let t = char_table(self.group);
        Some(&self.values[t.class_index(class)?])
    }

    /// Evaluate at a group element via its cycle type.
    pub fn value_at_element(&self, w: &SignedPermutation) -> BigRational {
        let ct = w.cycle_type();
        let class = match self.group {
            Group::S(_) => {
                assert!(ct.neg.is_empty(), "S_n element has no negative cycles");
                ClassId::S(ct.pos)
            }
            Group::W(_) => ClassId::W(ct),
        };
        self.value_at(&class).expect("element of the group").clone()
    }

    /// ⟨f, g⟩ = (1/|G|) Σ_c |c| f(c) g(c); all values are rational and
    /// conjugation is trivial for these groups.
    pub fn inner_product(&self, other: &ClassFunction) -> Result<BigRational> {
        if self.group != other.group {
            return Err(Error::SizeMismatch("inner product across groups".into()));
        }
        let t = char_table(self.group);
        let mut acc = BigRational::zero();
        for i in 0..self.values.len() {
            acc += BigRational::from(t.class_sizes[i].clone()) * &self.values[i]
                * &other.values[i];
        }
        Ok(acc / BigRational::from(self.group.order()))
    }

    /// Multiplicities against the full table. Errors unless every
    /// multiplicity is a nonnegative integer and the reconstruction matches.
    pub fn decompose(&self) -> Result<Vec<(IrrId, usize)>> {
        let t = char_table(self.group);
        let mut out = Vec::new();
        let mut recon = ClassFunction::zero(self.group);
        for (i, irr) in t.irreducibles.iter().enumerate() {
            let m = self.inner_product(&ClassFunction {
                group: self.group,
                values: t.values[i].clone(),
            })?;
            if !m.is_integer() || m.is_negative() {
                return Err(Error::NotACharacter(format!(
                    "multiplicity of {irr} is {m}"
                )));
            }
            let mult = m.to_integer().to_usize().expect("multiplicity fits usize");
            if mult > 0 {
                for (j, v) in t.values[i].iter().enumerate() {
                    recon.values[j] += v * BigRational::from(BigInt::from(mult));
                }
                out.push((irr.clone(), mult));
            }
        }
        if recon != *self {
            return Err(Error::NotACharacter("reconstruction does not match".into()));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let t = char_table(self.group);
        let mut map = serde_json::Map::new();
        for (i, c) in t.classes.iter().enumerate() {
            let v = &self.values[i];
            let cell = if v.is_integer() {
                match v.to_integer().to_i64() {
                    Some(x) => serde_json::json!(x),
                    None => serde_json::json!(v.to_string()),
                }
            } else {
                serde_json::json!(v.to_string())
            };
            map.insert(c.key(), cell);
        }
        serde_json::json!({
            "group": self.group.name(),
            "n": self.group.n(),
            "values": map,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ClassFunction> {
        let bad = |m: &str| Error::Invalid(format!("class function JSON: {m}"));
        let kind = v.get("group").and_then(|x| x.as_str()).ok_or_else(|| bad("missing group"))?;
        let n = v.get("n").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing n"))? as usize;
        let group = match kind {
            "S" => Group::S(n),
            "W" => Group::W(n),
            _ => return Err(bad("group must be S or W")),
        };
        let t = char_table(group);
        let map = v.get("values").and_then(|x| x.as_object()).ok_or_else(|| bad("missing values"))?;
        let mut values = vec![BigRational::zero(); t.classes.len()];
        for (k, cell) in map {
            let class = ClassId::parse(group, k)?;
            let idx = t.class_index(&class).ok_or_else(|| bad("unknown class"))?;
            values[idx] = if let Some(x) = cell.as_i64() {
                BigRational::from(BigInt::from(x))
            } else if let Some(s) = cell.as_str() {
                s.parse::<BigRational>().map_err(|_| bad("bad rational"))?
            } else {
                return Err(bad("value must be integer or string"));
            };
        }
        Ok(ClassFunction { group, values })
    }
}

/// Induction of f ⊠ g from the parabolic G_a × G_b to G_{a+b}, via the
/// class-splitting convolution.
pub fn ind_product(f: &ClassFunction, g: &ClassFunction) -> Result<ClassFunction> {
    match (f.group, g.group) {
        (Group::S(a), Group::S(b)) => {
            let big = Group::S(a + b);
            let t = char_table(big);
            let ft = char_table(f.group);
            let gt = char_table(g.group);
            let mut values = Vec::with_capacity(t.classes.len());
            for class in &t.classes {
                let ClassId::S(mu) = class else { unreachable!() };
                let mut acc = BigRational::zero();
                for (m1, m2) in splittings_s(mu, a) {
                    let i1 = ft.class_index(&ClassId::S(m1.clone())).unwrap();
                    let i2 = gt.class_index(&ClassId::S(m2.clone())).unwrap();
                    if f.values[i1].is_zero() || g.values[i2].is_zero() {
                        continue;
                    }
                    acc += &f.values[i1] * &g.values[i2]
                        / BigRational::from(z_s(&m1) * z_s(&m2));
                }
                values.push(acc * BigRational::from(z_s(mu)));
            }
            Ok(ClassFunction { group: big, values })
        }
        (Group::W(a), Group::W(b)) => {
            let big = Group::W(a + b);
            let t = char_table(big);
            let ft = char_table(f.group);
            let gt = char_table(g.group);
            let mut values = Vec::with_capacity(t.classes.len());
            for class in &t.classes {
                let ClassId::W(c) = class else { unreachable!() };
                let mut acc = BigRational::zero();
                for (c1, c2) in splittings_w(c, a) {
                    let i1 = ft.class_index(&ClassId::W(c1.clone())).unwrap();
                    let i2 = gt.class_index(&ClassId::W(c2.clone())).unwrap();
                    if f.values[i1].is_zero() || g.values[i2].is_zero() {
                        continue;
                    }
                    acc += &f.values[i1] * &g.values[i2]
                        / BigRational::from(z_w(&c1) * z_w(&c2));
                }
                values.push(acc * BigRational::from(z_w(c)));
            }
            Ok(ClassFunction { group: big, values })
        }
        _ => Err(Error::SizeMismatch("induction across group kinds".into())),
    }
}

/// Ind_{G_k × G_{n-k}}^{G_n} (inner ⊠ trivial).
pub fn induce_from_parabolic(inner: &ClassFunction, n: usize) -> Result<ClassFunction> {
    let k = inner.group.n();
    if k > n {
        return Err(Error::Range(format!("cannot induce from {k} into {n}")));
    }
    let trivial = match inner.group {
        Group::S(_) => ClassFunction::trivial(Group::S(n - k)),
        Group::W(_) => ClassFunction::trivial(Group::W(n - k)),
    };
    ind_product(inner, &trivial)
}

/// Stable name padding `λ[n] = (n - |λ|, λ_1, ..., λ_ℓ)`.
pub fn pad_partition(lambda: &[usize], n: usize) -> Result<Partition> {
    let k: usize = lambda.iter().sum();
    let first = lambda.first().copied().unwrap_or(0);
    if n < k + first {
        return Err(Error::Range(format!(
            "cannot pad {lambda:?} to n = {n}; need n ≥ {}",
            k + first
        )));
    }
    let mut out = Vec::with_capacity(lambda.len() + 1);
    out.push(n - k);
    out.extend_from_slice(lambda);
    while out.last() == Some(&0) {
        out.pop();
    }
    Ok(out)
}

/// Stable name padding for W: (λ+\[n - |λ-|\], λ-).
pub fn pad_bipartition(plus: &[usize], minus: &[usize], n: usize) -> Result<Bipartition> {
    let k: usize = minus.iter().sum();
    if n < k {
        return Err(Error::Range("n smaller than |λ-|".into()));
    }
    Ok(Bipartition { plus: pad_partition(plus, n - k)?, minus: minus.to_vec() })
}

/// Restriction of a W_n class function to S_n: evaluate at all-positive
/// signed cycle types.
pub fn restrict_to_sn(f: &ClassFunction) -> Result<ClassFunction> {
    let Group::W(n) = f.group else {
        return Err(Error::SizeMismatch("restriction expects a W class function".into()));
    };
    let wt = char_table(f.group);
    let st = char_table(Group::S(n));
    let mut values = Vec::with_capacity(st.classes.len());
    for class in &st.classes {
        let ClassId::S(mu) = class else { unreachable!() };
        let widx = wt
            .class_index(&ClassId::W(SignedCycleType { pos: mu.clone(), neg: vec![] }))
            .unwrap();
        values.push(f.values[widx].clone());
    }
    Ok(ClassFunction { group: Group::S(n), values })
}

/// Conjugacy data of the type D Weyl group (even sign changes), brute-forced.
/// Class fusion of split classes is subtle, so this is desk-scale only.
#[derive(Debug, Clone)]
pub struct TypeDClasses {
    pub n: usize,
    pub reps: Vec<SignedPermutation>,
    pub sizes: Vec<usize>,
    pub order: usize,
}

pub fn type_d_classes(n: usize) -> Result<TypeDClasses> {
    if n > 4 {
        return Err(Error::Unsupported("type D classes are brute-forced for n ≤ 4".into()));
    }
    let elements: Vec<SignedPermutation> = crate::weyl::all_elements(crate::ground::RootFamily::C, n)
        .into_iter()
        .filter(|w| (0..n).map(|i| w.sign(i)).product::<i8>() == 1)
        .collect();
    let mut reps: Vec<SignedPermutation> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    let mut assigned: Vec<bool> = vec![false; elements.len()];
    for i in 0..elements.len() {
        if assigned[i] {
            continue;
        }
        let mut class = std::collections::BTreeSet::new();
        for g in &elements {
            class.insert(g.compose(&elements[i]).unwrap().compose(&g.invert()).unwrap());
        }
        for (j, e) in elements.iter().enumerate() {
            if class.contains(e) {
                assigned[j] = true;
            }
        }
        sizes.push(class.len());
        reps.push(elements[i].clone());
    }
    Ok(TypeDClasses { n, reps, sizes, order: elements.len() })
}

/// Values of a W_n class function on the type D classes.
pub fn restrict_to_type_d(f: &ClassFunction, d: &TypeDClasses) -> Result<Vec<BigRational>> {
    let Group::W(n) = f.group else {
        return Err(Error::SizeMismatch("restriction expects a W class function".into()));
    };
    if n != d.n {
        return Err(Error::SizeMismatch("rank mismatch".into()));
    }
    Ok(d.reps.iter().map(|w| f.value_at_element(w)).collect())
}
