//! Signed permutations (the hyperoctahedral group), their action on labelled
//! partitions, signed cycle types, orbits, and stabilizers.

use crate::error::{Error, Result};
use crate::ground::{GroundSpace, RootFamily};
use crate::partition::{enumerate, IntegerLabelledPartition, LabelledPartition};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// An element (σ, ε) of W_n = (Z/2) ≀ S_n, acting on X^n by permuting
/// coordinates and inverting those with ε = -1. Stored with 0-based images.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedPermutation {
    sigma: Vec<usize>,
    eps: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> SignedPermutation {
        SignedPermutation { sigma: (0..n).collect(), eps: vec![1; n] }
    }

    /// From 1-based one-line image notation and ±1 signs.
    pub fn new(sigma_one_based: Vec<usize>, eps: Vec<i8>) -> Result<SignedPermutation> {
        let n = sigma_one_based.len();
        if eps.len() != n {
            return Err(Error::SizeMismatch("sigma and eps lengths differ".into()));
        }
        let mut seen = vec![false; n];
        for &img in &sigma_one_based {
            if img < 1 || img > n || seen[img - 1] {
                return Err(Error::Invalid("sigma is not a permutation".into()));
            }
            seen[img - 1] = true;
        }
        if eps.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::Invalid("eps entries must be ±1".into()));
        }
        Ok(SignedPermutation {
            sigma: sigma_one_based.into_iter().map(|i| i - 1).collect(),
            eps,
        })
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// σ(i), 0-based.
    pub fn image(&self, i: usize) -> usize {
        self.sigma[i]
    }

    pub fn sign(&self, i: usize) -> i8 {
        self.eps[i]
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| i == s) && self.eps.iter().all(|&e| e == 1)
    }

    /// self ∘ other: apply `other` first.
    pub fn compose(&self, other: &SignedPermutation) -> Result<SignedPermutation> {
        let n = self.n();
        if other.n() != n {
            return Err(Error::SizeMismatch("composing different ranks".into()));
        }
        let mut sigma = vec![0; n];
        let mut eps = vec![1i8; n];
        for i in 0..n {
            sigma[i] = self.sigma[other.sigma[i]];
            eps[i] = self.eps[other.sigma[i]] * other.eps[i];
        }
        Ok(SignedPermutation { sigma, eps })
    }

    pub fn invert(&self) -> SignedPermutation {
        let n = self.n();
        let mut sigma = vec![0; n];
        let mut eps = vec![1i8; n];
        for i in 0..n {
            sigma[self.sigma[i]] = i;
            eps[self.sigma[i]] = self.eps[i];
        }
        SignedPermutation { sigma, eps }
    }

    /// Action on a barred symbol code: w·k = σ(k), barred iff ε_k = -1,
    /// extended by w·k̄ = conj(w·k).
    pub fn apply_code(&self, code: u16) -> u16 {
        let idx = (code / 2) as usize;
        let barred = code % 2 == 1;
        let img = self.sigma[idx] as u16;
        let flip = self.eps[idx] == -1;
        2 * img + u16::from(barred ^ flip)
    }

    /// Action on a labelled partition; labels follow their blocks.
    pub fn act(&self, p: &LabelledPartition) -> Result<LabelledPartition> {
        if self.n() != p.n() {
            return Err(Error::SizeMismatch("acting with mismatched rank".into()));
        }
        let blocks: Vec<Vec<u16>> = p
            .raw_blocks()
            .iter()
            .map(|b| b.iter().map(|&c| self.apply_code(c)).collect())
            .collect();
        let labels: Vec<_> = (0..p.block_count()).map(|i| p.label_of(i)).collect();
        Ok(LabelledPartition::from_codes(p.n(), blocks, labels))
    }

    /// Cycle type: lengths of σ-cycles split by the product of ε over each
    /// cycle. A complete conjugacy invariant of W_n.
    pub fn cycle_type(&self) -> SignedCycleType {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut sign = 1i8;
            let mut i = start;
            loop {
                seen[i] = true;
                len += 1;
                sign *= self.eps[i];
                i = self.sigma[i];
                if i == start {
                    break;
                }
            }
            if sign == 1 {
                pos.push(len);
            } else {
                neg.push(len);
            }
        }
        pos.sort_unstable_by(|a, b| b.cmp(a));
        neg.sort_unstable_by(|a, b| b.cmp(a));
        SignedCycleType { pos, neg }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sigma": self.sigma.iter().map(|&i| i + 1).collect::<Vec<_>>(),
            "eps": self.eps.iter().map(|&e| e as i64).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SignedPermutation> {
        let bad = |m: &str| Error::Invalid(format!("signed permutation JSON: {m}"));
        let sigma = v
            .get("sigma")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("missing sigma"))?
            .iter()
            .map(|x| x.as_u64().map(|u| u as usize).ok_or_else(|| bad("bad sigma entry")))
            .collect::<Result<Vec<_>>>()?;
        let eps = v
            .get("eps")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("missing eps"))?
            .iter()
            .map(|x| x.as_i64().map(|e| e as i8).ok_or_else(|| bad("bad eps entry")))
            .collect::<Result<Vec<_>>>()?;
        SignedPermutation::new(sigma, eps)
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}{}", if self.eps[i] < 0 { "-" } else { "" }, self.sigma[i] + 1)?;
        }
        write!(f, "]")
    }
}

/// Conjugacy-class datum: cycle lengths with positive sign product, and with
/// negative sign product. |pos| + |neg| = n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedCycleType {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

impl SignedCycleType {
    pub fn total(&self) -> usize {
        self.pos.iter().sum::<usize>() + self.neg.iter().sum::<usize>()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "pos": self.pos, "neg": self.neg })
    }
}

impl fmt::Display for SignedCycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(f, "({}|{})", join(&self.pos), join(&self.neg))
    }
}

/// A canonical representative: cycles laid out consecutively, negative cycles
/// carrying one sign flip on their first coordinate.
pub fn class_representative(c: &SignedCycleType) -> SignedPermutation {
    let n = c.total();
    let mut sigma = vec![0usize; n];
    let mut eps = vec![1i8; n];
    let mut at = 0;
    for (parts, negative) in [(&c.pos, false), (&c.neg, true)] {
        for &len in parts.iter() {
            for k in 0..len {
                sigma[at + k] = at + (k + 1) % len;
            }
            if negative {
                eps[at] = -1;
            }
            at += len;
        }
    }
    SignedPermutation { sigma, eps }
}

/// Standard generators: adjacent transpositions, plus the first sign flip for
/// the families acted on by the full hyperoctahedral group.
pub fn generators(family: RootFamily, n: usize) -> Vec<SignedPermutation> {
    let mut gens = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.swap(i, i + 1);
        gens.push(SignedPermutation { sigma, eps: vec![1; n] });
    }
    if family.uses_signs() {
        let mut eps = vec![1i8; n];
        eps[0] = -1;
        gens.push(SignedPermutation { sigma: (0..n).collect(), eps });
    }
    gens
}

/// Every element of the acting group. Exponential; guarded to small n.
pub fn all_elements(family: RootFamily, n: usize) -> Vec<SignedPermutation> {
    assert!(n <= 6, "refusing to enumerate W_n / S_n beyond n = 6");
    let mut perms = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in perms {
            for i in 0..n {
                if !p.contains(&i) {
                    let mut q: Vec<usize> = p.clone();
                    q.push(i);
                    next.push(q);
                }
            }
        }
        perms = next;
    }
    let mut out = Vec::new();
    for sigma in perms {
        if family.uses_signs() {
            for mask in 0..(1u32 << n) {
                let eps: Vec<i8> =
                    (0..n).map(|i| if mask & (1 << i) != 0 { -1 } else { 1 }).collect();
                out.push(SignedPermutation { sigma: sigma.clone(), eps });
            }
        } else {
            out.push(SignedPermutation { sigma, eps: vec![1; n] });
        }
    }
    out.sort();
    out
}

/// Orbit of a labelled partition under the generator closure.
pub fn orbit_of(p: &LabelledPartition, family: RootFamily) -> Vec<LabelledPartition> {
    let gens = generators(family, p.n());
    let mut seen: BTreeSet<LabelledPartition> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(p.clone());
    queue.push_back(p.clone());
    while let Some(q) = queue.pop_front() {
        for g in &gens {
            let img = g.act(&q).expect("same rank");
            if seen.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    seen.into_iter().collect()
}

/// Group the rank slice by the hat map and check that each nonempty fiber is
/// exactly one generator-closure orbit.
pub fn orbits_by_hat(
    family: RootFamily,
    space: &GroundSpace,
    n: usize,
    rank: usize,
) -> BTreeMap<IntegerLabelledPartition, Vec<LabelledPartition>> {
    let slice: Vec<_> = enumerate(family, space, n, Some(rank))
        .into_iter()
        .filter(|p| p.rank() == rank)
        .collect();
    let mut fibers: BTreeMap<IntegerLabelledPartition, Vec<LabelledPartition>> = BTreeMap::new();
    for p in slice {
        fibers.entry(p.hat()).or_default().push(p);
    }
    for (hat, fiber) in &fibers {
        let orbit = orbit_of(&fiber[0], family);
        assert_eq!(
            orbit, *fiber,
            "hat fiber {hat} is not a single orbit (family {family:?})"
        );
    }
    fibers
}

/// A generating set for the stabilizer of Σ in the acting group, built from
/// the block structure: full signed symmetry inside each labelled block,
/// twisted symmetric groups inside each pair, pair flips, and swaps between
/// pairs of equal shape.
pub fn stabilizer(p: &LabelledPartition, family: RootFamily) -> Vec<SignedPermutation> {
    let n = p.n();
    let mut gens: Vec<SignedPermutation> = Vec::new();
    let signs = family.uses_signs();

    for (_, _, support) in p.labelled_blocks() {
        for w in support.windows(2) {
            let mut sigma: Vec<usize> = (0..n).collect();
            sigma.swap(w[0] - 1, w[1] - 1);
            gens.push(SignedPermutation { sigma, eps: vec![1; n] });
        }
        let mut eps = vec![1i8; n];
        eps[support[0] - 1] = -1;
        gens.push(SignedPermutation { sigma: (0..n).collect(), eps });
    }

    // (support index, barred-in-rep) profile per unlabelled pair, rep block first
    let pairs: Vec<Vec<(usize, bool)>> = p
        .unlabelled_pairs()
        .iter()
        .map(|&(i, _)| {
            p.raw_blocks()[i]
                .iter()
                .map(|&c| ((c / 2) as usize, c % 2 == 1))
                .collect()
        })
        .collect();

    for members in &pairs {
        // twisted adjacent transpositions inside the pair
        for w in members.windows(2) {
            let ((u, bu), (v, bv)) = (w[0], w[1]);
            let mut sigma: Vec<usize> = (0..n).collect();
            sigma.swap(u, v);
            let mut eps = vec![1i8; n];
            if bu != bv {
                if !signs {
                    continue;
                }
                eps[u] = -1;
                eps[v] = -1;
            }
            gens.push(SignedPermutation { sigma, eps });
        }
        // the flip S -> S̄
        if signs {
            let mut eps = vec![1i8; n];
            for &(u, _) in members {
                eps[u] = -1;
            }
            gens.push(SignedPermutation { sigma: (0..n).collect(), eps });
        }
    }

    // swaps between consecutive pairs of equal size
    for k in 0..pairs.len() {
        for l in (k + 1)..pairs.len() {
            if pairs[k].len() != pairs[l].len() {
                continue;
            }
            let mut sigma: Vec<usize> = (0..n).collect();
            let mut eps = vec![1i8; n];
            let mut ok = true;
            for (&(u, bu), &(v, bv)) in pairs[k].iter().zip(pairs[l].iter()) {
                sigma[u] = v;
                sigma[v] = u;
                if bu != bv {
                    if !signs {
                        ok = false;
                        break;
                    }
                    eps[u] = -1;
                    eps[v] = -1;
                }
            }
            if ok {
                gens.push(SignedPermutation { sigma, eps });
            }
            break; // consecutive swaps generate the whole symmetric layer
        }
    }

    let mut out: Vec<SignedPermutation> = Vec::new();
    for g in gens {
        debug_assert_eq!(g.act(p).unwrap(), *p, "stabilizer generator must fix Σ");
        if !out.contains(&g) && !g.is_identity() {
            out.push(g);
        }
    }
    if out.is_empty() {
        out.push(SignedPermutation::identity(n));
    }
    out
}

/// Closure of a generating set; exponential, for small-n verification.
pub fn subgroup_closure(gens: &[SignedPermutation], n: usize) -> Vec<SignedPermutation> {
    let mut seen: BTreeSet<SignedPermutation> = BTreeSet::new();
    let id = SignedPermutation::identity(n);
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let gh = g.compose(h).unwrap();
            if seen.insert(gh.clone()) {
                queue.push_back(gh);
            }
        }
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::SplitMix;
    use crate::ground::SpaceKind;

    fn parse(_n: usize, s: &str) -> LabelledPartition {
        LabelledPartition::from_json(&serde_json::from_str(s).unwrap()).unwrap()
    }

    #[test]
    fn group_axioms() {
        let w = SignedPermutation::new(vec![2, 1], vec![1, 1]).unwrap();
        assert_eq!(w.compose(&w).unwrap(), SignedPermutation::identity(2));
        assert_eq!(w.compose(&w.invert()).unwrap(), SignedPermutation::identity(2));
        assert_eq!(SignedPermutation::identity(2).compose(&w).unwrap(), w);
        let mut rng = SplitMix::new(17);
        let els = all_elements(RootFamily::C, 3);
        for _ in 0..200 {
            let a = &els[rng.below(els.len())];
            let b = &els[rng.below(els.len())];
            let c = &els[rng.below(els.len())];
            assert_eq!(
                a.compose(b).unwrap().compose(c).unwrap(),
                a.compose(&b.compose(c).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn act_examples() {
        let p = parse(2, r#"{"n":2,"blocks":[["1","2"],["1-","2-"]],"labels":{}}"#);
        let w = SignedPermutation::new(vec![2, 1], vec![1, -1]).unwrap();
        let expect = parse(2, r#"{"n":2,"blocks":[["1","2-"],["1-","2"]],"labels":{}}"#);
        assert_eq!(w.act(&p).unwrap(), expect);

        let id = SignedPermutation::identity(2);
        assert_eq!(id.act(&p).unwrap(), p);

        let top = parse(2, r#"{"n":2,"blocks":[["1","1-","2","2-"]],"labels":{"0":"a"}}"#);
        for w in all_elements(RootFamily::C, 2) {
            assert_eq!(w.act(&top).unwrap(), top);
        }
    }

    #[test]
    fn action_is_a_left_action_and_preserves_structure() {
        // exhaustive over W_3 × W_3 × the full toric type C poset
        let sp = GroundSpace::new(SpaceKind::Toric);
        let all = enumerate(RootFamily::C, &sp, 3, None);
        let els = all_elements(RootFamily::C, 3);
        for w1 in &els {
            for w2 in &els {
                let composed = w1.compose(w2).unwrap();
                for p in &all {
                    let lhs = w1.act(&w2.act(p).unwrap()).unwrap();
                    assert_eq!(lhs, composed.act(p).unwrap());
                    assert_eq!(lhs.rank(), p.rank());
                    assert_eq!(lhs.hat(), p.hat());
                    assert!(lhs.is_admissible(RootFamily::C, &sp));
                }
            }
        }
    }

    fn random_element(n: usize, rng: &mut SplitMix) -> SignedPermutation {
        let mut sigma: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            sigma.swap(i, rng.below(i + 1));
        }
        let eps: Vec<i8> = (0..n).map(|_| if rng.below(2) == 0 { 1 } else { -1 }).collect();
        SignedPermutation::new(sigma, eps).unwrap()
    }

    #[test]
    fn action_law_randomized_at_rank_six() {
        let sp = GroundSpace::new(SpaceKind::Elliptic);
        let slice: Vec<_> = enumerate(RootFamily::C, &sp, 6, Some(2))
            .into_iter()
            .filter(|p| p.rank() == 2)
            .collect();
        let mut rng = SplitMix::new(606);
        for _ in 0..120 {
            let w1 = random_element(6, &mut rng);
            let w2 = random_element(6, &mut rng);
            let p = &slice[rng.below(slice.len())];
            let lhs = w1.act(&w2.act(p).unwrap()).unwrap();
            let rhs = w1.compose(&w2).unwrap().act(p).unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(lhs.hat(), p.hat());
        }
    }

    #[test]
    fn leq_is_equivariant() {
        let sp = GroundSpace::new(SpaceKind::Toric);
        let all = enumerate(RootFamily::C, &sp, 2, None);
        for w in all_elements(RootFamily::C, 2) {
            for a in &all {
                for b in &all {
                    if a.leq(b).unwrap() {
                        assert!(w.act(a).unwrap().leq(&w.act(b).unwrap()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(
            SignedPermutation::identity(2).cycle_type(),
            SignedCycleType { pos: vec![1, 1], neg: vec![] }
        );
        let w = SignedPermutation::new(vec![1, 2], vec![-1, 1]).unwrap();
        assert_eq!(w.cycle_type(), SignedCycleType { pos: vec![1], neg: vec![1] });
        let types: BTreeSet<_> =
            all_elements(RootFamily::C, 3).iter().map(|w| w.cycle_type()).collect();
        assert_eq!(types.len(), 10);
    }

    #[test]
    fn cycle_type_is_a_conjugacy_invariant() {
        for n in 1..=4 {
            let els = all_elements(RootFamily::C, n);
            let mut rng = SplitMix::new(99);
            for _ in 0..300 {
                let w = &els[rng.below(els.len())];
                let g = &els[rng.below(els.len())];
                let conj = g.compose(w).unwrap().compose(&g.invert()).unwrap();
                assert_eq!(conj.cycle_type(), w.cycle_type());
            }
        }
        // completeness for n ≤ 4: each cycle-type fiber is one conjugacy
        // class
        for n in 1..=4 {
            let els = all_elements(RootFamily::C, n);
            let mut by_type: BTreeMap<SignedCycleType, Vec<&SignedPermutation>> = BTreeMap::new();
            for w in &els {
                by_type.entry(w.cycle_type()).or_default().push(w);
            }
            for (_, members) in by_type {
                let w0 = members[0];
                let class: BTreeSet<_> = els
                    .iter()
                    .map(|g| g.compose(w0).unwrap().compose(&g.invert()).unwrap())
                    .collect();
                assert_eq!(class.len(), members.len());
            }
        }
    }

    #[test]
    fn class_representative_has_right_type() {
        let c = SignedCycleType { pos: vec![3, 1], neg: vec![2] };
        assert_eq!(class_representative(&c).cycle_type(), c);
    }

    #[test]
    fn orbit_examples() {
        let bottom = LabelledPartition::bottom(2);
        assert_eq!(orbit_of(&bottom, RootFamily::C), vec![bottom.clone()]);

        let sp = GroundSpace::new(SpaceKind::Toric);
        // fiber of (1_a, 1) in type C toric n = 2
        let fibers = orbits_by_hat(RootFamily::C, &sp, 2, 1);
        let key = parse(2, r#"{"n":2,"blocks":[["1","1-"],["2"],["2-"]],"labels":{"0":"a"}}"#).hat();
        assert_eq!(fibers.get(&key).map(|f| f.len()), Some(2));
        // single rank-one orbit of size 2 in type D toric n = 2
        let d_fibers = orbits_by_hat(RootFamily::D, &sp, 2, 1);
        assert_eq!(d_fibers.len(), 1);
        let fiber = d_fibers.values().next().unwrap();
        assert_eq!(fiber.len(), 2);
        assert!(fiber.contains(&parse(2, r#"{"n":2,"blocks":[["1","2"],["1-","2-"]],"labels":{}}"#)));
        assert!(fiber.contains(&parse(2, r#"{"n":2,"blocks":[["1","2-"],["1-","2"]],"labels":{}}"#)));
    }

    #[test]
    fn stabilizer_matches_brute_force() {
        for (family, kind) in [
            (RootFamily::C, SpaceKind::Toric),
            (RootFamily::D, SpaceKind::Elliptic),
            (RootFamily::A, SpaceKind::Toric),
        ] {
            let sp = GroundSpace::new(kind);
            for n in 1..=4 {
                let els = all_elements(family, n);
                for p in enumerate(family, &sp, n, None) {
                    let brute: Vec<_> =
                        els.iter().filter(|w| w.act(&p).unwrap() == p).cloned().collect();
                    let gens = stabilizer(&p, family);
                    let closure = subgroup_closure(&gens, n);
                    assert_eq!(closure, brute, "stabilizer of {p} in family {family:?}");
                    let orbit = orbit_of(&p, family);
                    assert_eq!(orbit.len() * closure.len(), els.len());
                }
            }
        }
    }

    #[test]
    fn stabilizer_orders_from_examples() {
        let h12 = parse(2, r#"{"n":2,"blocks":[["1","2"],["1-","2-"]],"labels":{}}"#);
        assert_eq!(subgroup_closure(&stabilizer(&h12, RootFamily::C), 2).len(), 4);
        let labelled = parse(2, r#"{"n":2,"blocks":[["1","1-"],["2"],["2-"]],"labels":{"0":"a"}}"#);
        assert_eq!(subgroup_closure(&stabilizer(&labelled, RootFamily::C), 2).len(), 4);
        let bottom = LabelledPartition::bottom(3);
        assert_eq!(subgroup_closure(&stabilizer(&bottom, RootFamily::C), 3).len(), 48);
    }

    #[test]
    fn signed_permutation_json_round_trip() {
        let w = SignedPermutation::new(vec![2, 1, 3], vec![1, -1, 1]).unwrap();
        let j = w.to_json();
        assert_eq!(j.to_string(), r#"{"eps":[1,-1,1],"sigma":[2,1,3]}"#);
        assert_eq!(SignedPermutation::from_json(&j).unwrap(), w);
        let ct = SignedCycleType { pos: vec![2], neg: vec![1] };
        assert_eq!(ct.to_json().to_string(), r#"{"neg":[1],"pos":[2]}"#);
    }
}
