//! Top Orlik–Solomon component of the localization at a layer, with the
//! action of the layer's stabilizer. Generators are the rank-one layers below
//! Σ; automorphisms send generators to generators without sign, all signs
//! coming from exterior reordering and circuit straightening in the
//! no-broken-circuit basis.

use crate::ground::{RootFamily, Torsion};
use crate::partition::{BarredElement, LabelledPartition};
use crate::weyl::SignedPermutation;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::HashMap;

/// The rank-one layers of the family's arrangement below Σ, in a fixed
/// order: H_ij, then H'_ij, then H_i^z, each lexicographic. Point layers
/// H_i^z exist for all z in type C, only for z = e in type B, and not at all
/// in types A and D.
pub fn atoms_below(p: &LabelledPartition, family: RootFamily) -> Vec<LabelledPartition> {
    let n = p.n();
    let where_block = p.block_of_code();
    let code = |i: usize, barred: bool| BarredElement::new(i, barred).code();
    let mut atoms = Vec::new();
    for i in 1..=n {
        for j in i + 1..n + 1 {
            if where_block[code(i, false) as usize] == where_block[code(j, false) as usize] {
                atoms.push(atom_h(n, i, j));
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..n + 1 {
            if where_block[code(i, false) as usize] == where_block[code(j, true) as usize] {
                atoms.push(atom_h_prime(n, i, j));
            }
        }
    }
    for (_, z, support) in p.labelled_blocks() {
        let keep = match family {
            RootFamily::C => true,
            RootFamily::B => z.is_identity(),
            RootFamily::A | RootFamily::D => false,
        };
        if keep {
            for i in support {
                atoms.push(atom_point(n, i, z));
            }
        }
    }
    atoms
}

fn merge_atom(n: usize, a: u16, b: u16) -> LabelledPartition {
    let mut blocks = vec![vec![a, b], vec![crate::partition::bar_code(a), crate::partition::bar_code(b)]];
    let mut labels = vec![None, None];
    for c in 0..2 * n as u16 {
        if c != a && c != b && c != crate::partition::bar_code(a) && c != crate::partition::bar_code(b) {
            blocks.push(vec![c]);
            labels.push(None);
        }
    }
    LabelledPartition::from_codes(n, blocks, labels)
}

/// The layer x_i = x_j.
pub fn atom_h(n: usize, i: usize, j: usize) -> LabelledPartition {
    merge_atom(n, BarredElement::new(i, false).code(), BarredElement::new(j, false).code())
}

/// The layer x_i = x_j^{-1}.
pub fn atom_h_prime(n: usize, i: usize, j: usize) -> LabelledPartition {
    merge_atom(n, BarredElement::new(i, false).code(), BarredElement::new(j, true).code())
}

/// The layer x_i = z.
pub fn atom_point(n: usize, i: usize, z: Torsion) -> LabelledPartition {
    let a = BarredElement::new(i, false).code();
    let mut blocks = vec![vec![a, crate::partition::bar_code(a)]];
    let mut labels = vec![Some(z)];
    for c in 0..2 * n as u16 {
        if c / 2 != a / 2 {
            blocks.push(vec![c]);
            labels.push(None);
        }
    }
    LabelledPartition::from_codes(n, blocks, labels)
}

/// The tangent form of a rank-one layer: v_i - v_j, v_i + v_j, or v_i.
fn atom_form(atom: &LabelledPartition) -> Vec<i64> {
    let n = atom.n();
    let mut form = vec![0i64; n];
    if let Some((_, _, support)) = atom.labelled_blocks().into_iter().next() {
        form[support[0] - 1] = 1;
        return form;
    }
    for (rep, _) in atom.unlabelled_pairs() {
        let block = &atom.raw_blocks()[rep];
        if block.len() == 2 {
            let a = BarredElement::from_code(block[0]);
            let b = BarredElement::from_code(block[1]);
            form[a.index - 1] = 1;
            form[b.index - 1] = if a.barred == b.barred { -1 } else { 1 };
            return form;
        }
    }
    unreachable!("rank-one layer has a single non-singleton block pair")
}

/// Top OS component of the localization at Σ, with straightening into the
/// no-broken-circuit basis.
pub struct OsTop {
    atoms: Vec<LabelledPartition>,
    atom_index: HashMap<LabelledPartition, usize>,
    forms: Vec<Vec<BigRational>>,
    pub q: usize,
    pub nbc: Vec<Vec<usize>>,
    nbc_index: HashMap<Vec<usize>, usize>,
}

impl OsTop {
    pub fn build(p: &LabelledPartition, family: RootFamily) -> OsTop {
        let q = p.rank();
        let atoms = atoms_below(p, family);
        let forms: Vec<Vec<BigRational>> = atoms
            .iter()
            .map(|a| {
                atom_form(a)
                    .into_iter()
                    .map(|c| BigRational::from(BigInt::from(c)))
                    .collect()
            })
            .collect();
        let atom_index =
            atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let mut os = OsTop { atoms, atom_index, forms, q, nbc: vec![], nbc_index: HashMap::new() };
        os.nbc = os.enumerate_nbc();
        os.nbc_index =
            os.nbc.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        os
    }

    pub fn dim(&self) -> usize {
        self.nbc.len()
    }

    pub fn atoms_count(&self) -> usize {
        self.atoms.len()
    }

    fn rank_of(&self, subset: &[usize]) -> usize {
        let mut rows: Vec<Vec<BigRational>> =
            subset.iter().map(|&i| self.forms[i].clone()).collect();
        let cols = rows.first().map_or(0, |r| r.len());
        crate::linalg::gauss_rank(&mut rows, cols)
    }

    fn in_span(&self, v: usize, subset: &[usize]) -> bool {
        let r = self.rank_of(subset);
        let mut with: Vec<usize> = subset.to_vec();
        with.push(v);
        self.rank_of(&with) == r
    }

    /// The unique circuit inside `base ∪ {y}` when y depends on the
    /// independent set `base`: y plus the support of its expression.
    fn fundamental_circuit(&self, y: usize, base: &[usize]) -> Vec<usize> {
        // solve forms[y] = Σ c_b forms[b]
        let cols = self.forms[y].len();
        let mut aug: Vec<Vec<BigRational>> = (0..cols)
            .map(|c| {
                let mut row: Vec<BigRational> =
                    base.iter().map(|&b| self.forms[b][c].clone()).collect();
                row.push(self.forms[y][c].clone());
                row
            })
            .collect();
        let width = base.len() + 1;
        let rows = aug.len();
        let mut pivot_col_of_row = Vec::new();
        let mut rank = 0;
        for col in 0..base.len() {
            let Some(p) = (rank..rows).find(|&r| !aug[r][col].is_zero()) else { continue };
            aug.swap(rank, p);
            let inv = aug[rank][col].clone();
            for x in aug[rank].iter_mut() {
                *x = &*x / &inv;
            }
            for r in 0..rows {
                if r != rank && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c2 in 0..width {
                        let sub = &f * &aug[rank][c2];
                        aug[r][c2] -= sub;
                    }
                }
            }
            pivot_col_of_row.push(col);
            rank += 1;
        }
        let mut circuit = vec![y];
        for (row, &col) in pivot_col_of_row.iter().enumerate() {
            if !aug[row][base.len()].is_zero() {
                circuit.push(base[col]);
            }
        }
        circuit.sort_unstable();
        circuit
    }

    fn enumerate_nbc(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.nbc_rec(0, &mut current, &mut out);
        out
    }

    fn nbc_rec(&self, from: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == self.q {
            out.push(current.clone());
            return;
        }
        for next in from..self.atoms.len() {
            if self.atoms.len() - next < self.q - current.len() {
                break;
            }
            current.push(next);
            if self.rank_of(current) == current.len() && self.is_nbc(current) {
                self.nbc_rec(next + 1, current, out);
            }
            current.pop();
        }
    }

    /// No broken circuit: no atom y outside S with y smaller than, and
    /// dependent on, the larger members of S.
    fn is_nbc(&self, subset: &[usize]) -> bool {
        for y in 0..*subset.last().unwrap() {
            if subset.contains(&y) {
                continue;
            }
            let bigger: Vec<usize> = subset.iter().copied().filter(|&s| s > y).collect();
            if !bigger.is_empty() && self.in_span(y, &bigger) {
                return false;
            }
        }
        true
    }

    /// Express e_T (sorted tuple of distinct atoms) in the NBC basis.
    fn straighten(&self, subset: Vec<usize>, coeff: i64, acc: &mut HashMap<usize, i64>) {
        if let Some(&idx) = self.nbc_index.get(&subset) {
            *acc.entry(idx).or_insert(0) += coeff;
            return;
        }
        if self.rank_of(&subset) < subset.len() {
            return; // e_S vanishes for dependent S
        }
        // find the smallest broken-circuit violation
        let violation = (0..self.atoms.len())
            .filter(|y| !subset.contains(y))
            .find_map(|y| {
                let bigger: Vec<usize> =
                    subset.iter().copied().filter(|&s| s > y).collect();
                if !bigger.is_empty() && self.in_span(y, &bigger) {
                    Some((y, bigger))
                } else {
                    None
                }
            });
        let Some((y, bigger)) = violation else {
            panic!("independent non-NBC set must contain a broken circuit");
        };
        let circuit = self.fundamental_circuit(y, &bigger);
        debug_assert_eq!(circuit[0], y);
        let broken: Vec<usize> = circuit[1..].to_vec();
        // e_broken = Σ_{i≥1} (-1)^{i+1} e_{circuit \ c_i}; substitute into
        // e_subset = ± e_broken ∧ e_rest
        let rest: Vec<usize> =
            subset.iter().copied().filter(|s| !broken.contains(s)).collect();
        let outer_sign = merge_sign(&broken, &rest);
        for i in 1..circuit.len() {
            let replaced: Vec<usize> =
                circuit.iter().copied().filter(|&c| c != circuit[i]).collect();
            let term_sign = if i % 2 == 1 { 1 } else { -1 };
            let inner_sign = merge_sign(&replaced, &rest);
            let mut merged: Vec<usize> =
                replaced.iter().chain(rest.iter()).copied().collect();
            merged.sort_unstable();
            self.straighten(merged, coeff * outer_sign * term_sign * inner_sign, acc);
        }
    }

    /// Matrix coefficient row of w on the NBC basis element `idx`, as the
    /// expansion of w · e_{nbc\[idx\]}.
    fn image_row(&self, w: &SignedPermutation, idx: usize) -> HashMap<usize, i64> {
        let images: Vec<usize> = self.nbc[idx]
            .iter()
            .map(|&a| {
                let moved = w.act(&self.atoms[a]).expect("same rank");
                *self
                    .atom_index
                    .get(&moved)
                    .expect("stabilizer permutes the atoms below Σ")
            })
            .collect();
        let (sorted, sign) = sort_with_sign(images);
        let mut acc = HashMap::new();
        self.straighten(sorted, sign, &mut acc);
        acc
    }

    /// Trace of w on the top OS component. Requires w · Σ = Σ.
    pub fn trace(&self, w: &SignedPermutation) -> i64 {
        let mut tr = 0;
        for idx in 0..self.nbc.len() {
            let row = self.image_row(w, idx);
            tr += row.get(&idx).copied().unwrap_or(0);
        }
        tr
    }

    /// Full matrix of w, rows indexed by target NBC elements.
    pub fn matrix(&self, w: &SignedPermutation) -> Vec<Vec<i64>> {
        let d = self.dim();
        let mut m = vec![vec![0i64; d]; d];
        for col in 0..d {
            for (row, c) in self.image_row(w, col) {
                m[row][col] = c;
            }
        }
        m
    }
}

/// Sign of sorting a tuple of distinct indices, with the sorted tuple.
fn sort_with_sign(mut v: Vec<usize>) -> (Vec<usize>, i64) {
    let mut sign = 1i64;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    (v, sign)
}

/// Sign of merging two internally sorted disjoint tuples by concatenation
/// then sorting: parity of the number of crossing pairs.
fn merge_sign(a: &[usize], b: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            debug_assert_ne!(x, y);
            if x > y {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}
