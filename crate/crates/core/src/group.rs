//! Finite subgroups of Aut((P¹)⁴) and identification of abstract groups of
//! order at most 16 by explicit isomorphism.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::hash::Hash;
use std::sync::OnceLock;

use indexmap::IndexSet;
use rayon::prelude::*;
use thiserror::Error;

use crate::autos::{compose, ProductAuto};
use crate::perm::Perm;

pub const DEFAULT_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("closure exceeded {cap} elements")]
    CapExceeded { cap: usize },
    #[error("group of order {0} is larger than 16 and cannot be identified")]
    TooLarge(usize),
}

/// A finite group given by its elements. Element 0 is the identity and the
/// remaining order is breadth-first in the generators.
#[derive(Debug, Clone)]
pub struct FiniteSubgroup {
    elements: IndexSet<ProductAuto>,
    generators: Vec<ProductAuto>,
    table: OnceLock<CayleyTable>,
}

pub fn closure(gens: &[ProductAuto], cap: usize) -> Result<FiniteSubgroup, GroupError> {
    let mut elements = IndexSet::new();
    elements.insert(ProductAuto::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        for g in gens {
            let next = compose(&elements[idx], g);
            let (pos, fresh) = elements.insert_full(next);
            if fresh {
                if elements.len() > cap {
                    return Err(GroupError::CapExceeded { cap });
                }
                queue.push_back(pos);
            }
        }
    }
    Ok(FiniteSubgroup {
        elements,
        generators: gens.to_vec(),
        table: OnceLock::new(),
    })
}

impl FiniteSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &ProductAuto> {
        self.elements.iter()
    }

    pub fn element(&self, i: usize) -> &ProductAuto {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &ProductAuto) -> Option<usize> {
        self.elements.get_index_of(g)
    }

    pub fn contains(&self, g: &ProductAuto) -> bool {
        self.elements.contains(g)
    }

    pub fn generators(&self) -> &[ProductAuto] {
        &self.generators
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &ProductAuto> {
        self.elements.iter().skip(1)
    }

    /// Multiplication table in element order, computed once.
    pub fn cayley_table(&self) -> &CayleyTable {
        self.table.get_or_init(|| self.build_table())
    }

    fn build_table(&self) -> CayleyTable {
        let n = self.order();
        let mul = (0..n)
            .into_par_iter()
            .map(|a| {
                (0..n)
                    .map(|b| {
                        self.index_of(&compose(&self.elements[a], &self.elements[b]))
                            .expect("closure is closed under composition")
                    })
                    .collect()
            })
            .collect();
        CayleyTable { mul }
    }

    /// Distinct permutation parts, in first-seen order.
    pub fn perm_image(&self) -> Vec<Perm> {
        let set: IndexSet<Perm> = self.elements.iter().map(|g| g.perm).collect();
        set.into_iter().collect()
    }

    /// Number of orbits of the permutation image on the four factors.
    pub fn factor_orbits(&self) -> usize {
        let perms = self.perm_image();
        let mut root: [usize; 4] = [0, 1, 2, 3];
        fn find(root: &mut [usize; 4], i: usize) -> usize {
            if root[i] == i {
                i
            } else {
                let r = find(root, root[i]);
                root[i] = r;
                r
            }
        }
        for p in &perms {
            for i in 0..4 {
                let (a, b) = (find(&mut root, i), find(&mut root, p.apply(i)));
                root[a] = b;
            }
        }
        (0..4).filter(|&i| find(&mut root, i) == i).count()
    }

    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        self.cayley_table().order_histogram()
    }
}

/// Multiplication table of a finite group with identity at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    mul: Vec<Vec<usize>>,
}

impl CayleyTable {
    /// Builds a table from any element list and multiplication, moving the
    /// identity to index 0.
    pub fn from_elements<T: Clone + Eq + Hash>(elems: Vec<T>, identity: T, mul: impl Fn(&T, &T) -> T) -> Self {
        let mut elems: IndexSet<T> = elems.into_iter().collect();
        let (pos, _) = elems.insert_full(identity);
        elems.swap_indices(0, pos);
        let mul = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| elems.get_index_of(&mul(a, b)).expect("element list closed under multiplication"))
                    .collect()
            })
            .collect();
        CayleyTable { mul }
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for a in 0..self.order() {
            *h.entry(self.element_order(a)).or_insert(0) += 1;
        }
        h
    }

    pub fn is_group(&self) -> bool {
        let n = self.order();
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))));
        let identity = (0..n).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a);
        let inverses = (0..n).all(|a| (0..n).any(|b| self.mul(a, b) == 0));
        assoc && identity && inverses
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    fn generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// A small generating set, preferring elements of large order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut candidates: Vec<usize> = (1..self.order()).collect();
        candidates.sort_by_key(|&a| std::cmp::Reverse(self.element_order(a)));
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        for a in candidates {
            if span.iter().all(|&s| s) {
                break;
            }
            if !span[a] {
                gens.push(a);
                span = self.generated(&gens);
            }
        }
        gens
    }

    /// An isomorphism `self → other` as an index map, if one exists.
    pub fn isomorphism_to(&self, other: &CayleyTable) -> Option<Vec<usize>> {
        if self.order() != other.order() || self.order_histogram() != other.order_histogram() {
            return None;
        }
        let gens = self.generating_set();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let ord = self.element_order(g);
                (0..other.order()).filter(|&b| other.element_order(b) == ord).collect()
            })
            .collect();
        let mut images = Vec::with_capacity(gens.len());
        self.search(other, &gens, &candidates, &mut images)
    }

    fn search(&self, other: &CayleyTable, gens: &[usize], candidates: &[Vec<usize>], images: &mut Vec<usize>) -> Option<Vec<usize>> {
        if images.len() == gens.len() {
            return self.extend(other, gens, images);
        }
        for &c in &candidates[images.len()] {
            images.push(c);
            if let Some(map) = self.search(other, gens, candidates, images) {
                return Some(map);
            }
            images.pop();
        }
        None
    }

    fn extend(&self, other: &CayleyTable, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = other.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        let mut hit = vec![false; n];
        for &v in &map {
            if v == usize::MAX || std::mem::replace(&mut hit[v], true) {
                return None;
            }
        }
        Some(map)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupType {
    pub label: &'static str,
    pub order: usize,
}

pub struct ReferenceGroup {
    pub label: &'static str,
    pub table: CayleyTable,
}

fn abelian(moduli: &[usize]) -> CayleyTable {
    let mut elems = vec![Vec::new()];
    for &m in moduli {
        elems = elems
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                (0..m).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    let moduli = moduli.to_vec();
    CayleyTable::from_elements(elems, vec![0; moduli.len()], move |a, b| {
        a.iter().zip(b).zip(&moduli).map(|((x, y), m)| (x + y) % m).collect()
    })
}

/// `Z_m ⋊ Z_n` where the generator of `Z_n` acts by multiplication by `r`.
fn metacyclic(m: usize, n: usize, r: usize) -> CayleyTable {
    let elems: Vec<(usize, usize)> = (0..m).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let rpow = move |b: usize| (0..b).fold(1, |acc, _| acc * r % m);
    CayleyTable::from_elements(elems, (0, 0), move |&(a1, b1), &(a2, b2)| ((a1 + rpow(b1) * a2) % m, (b1 + b2) % n))
}

fn dihedral(n: usize) -> CayleyTable {
    metacyclic(n, 2, n - 1)
}

/// Dicyclic group of order `4n`: `a^{2n} = 1, x² = aⁿ, x a x⁻¹ = a⁻¹`.
fn dicyclic(n: usize) -> CayleyTable {
    let m = 2 * n;
    let elems: Vec<(usize, usize)> = (0..m).flat_map(|k| [(k, 0), (k, 1)]).collect();
    CayleyTable::from_elements(elems, (0, 0), move |&(k1, j1), &(k2, j2)| match (j1, j2) {
        (0, j) => ((k1 + k2) % m, j),
        (1, 0) => ((k1 + m - k2) % m, 1),
        _ => ((k1 + m - k2 + n) % m, 0),
    })
}

fn direct_product(a: &CayleyTable, b: &CayleyTable) -> CayleyTable {
    let elems: Vec<(usize, usize)> = (0..a.order()).flat_map(|x| (0..b.order()).map(move |y| (x, y))).collect();
    CayleyTable::from_elements(elems, (0, 0), |&(x1, y1), &(x2, y2)| (a.mul(x1, x2), b.mul(y1, y2)))
}

/// `(Z4 × Z2) ⋊ Z2` with the given involutive automorphism of `Z4 × Z2`.
fn z4z2_by_z2(phi: fn((usize, usize)) -> (usize, usize)) -> CayleyTable {
    let elems: Vec<((usize, usize), usize)> = (0..4)
        .flat_map(|a| (0..2).flat_map(move |b| (0..2).map(move |c| ((a, b), c))))
        .collect();
    CayleyTable::from_elements(elems, ((0, 0), 0), move |&((a1, b1), c1), &(v2, c2)| {
        let (a2, b2) = if c1 == 1 { phi(v2) } else { v2 };
        (((a1 + a2) % 4, (b1 + b2) % 2), (c1 + c2) % 2)
    })
}

fn alternating4() -> CayleyTable {
    let even: Vec<Perm> = Perm::all()
        .into_iter()
        .filter(|p| p.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0)
        .collect();
    CayleyTable::from_elements(even, Perm::IDENTITY, |a, b| a.after(b))
}

/// One representative of every isomorphism class of groups of order ≤ 16.
pub fn reference_groups() -> &'static [ReferenceGroup] {
    static REFS: OnceLock<Vec<ReferenceGroup>> = OnceLock::new();
    REFS.get_or_init(|| {
        let ab = |label, m: &[usize]| ReferenceGroup { label, table: abelian(m) };
        let other = |label, table| ReferenceGroup { label, table };
        vec![
            ab("Z1", &[]),
            ab("Z2", &[2]),
            ab("Z3", &[3]),
            ab("Z4", &[4]),
            ab("Z2 x Z2", &[2, 2]),
            ab("Z5", &[5]),
            ab("Z6", &[6]),
            other("S3", dihedral(3)),
            ab("Z7", &[7]),
            ab("Z8", &[8]),
            ab("Z4 x Z2", &[4, 2]),
            ab("Z2 x Z2 x Z2", &[2, 2, 2]),
            other("D8", dihedral(4)),
            other("Q8", dicyclic(2)),
            ab("Z9", &[9]),
            ab("Z3 x Z3", &[3, 3]),
            ab("Z10", &[10]),
            other("D10", dihedral(5)),
            ab("Z11", &[11]),
            ab("Z12", &[12]),
            ab("Z6 x Z2", &[6, 2]),
            other("D12", dihedral(6)),
            other("A4", alternating4()),
            other("Z3 : Z4", dicyclic(3)),
            ab("Z13", &[13]),
            ab("Z14", &[14]),
            other("D14", dihedral(7)),
            ab("Z15", &[15]),
            ab("Z16", &[16]),
            ab("Z8 x Z2", &[8, 2]),
            ab("Z4 x Z4", &[4, 4]),
            ab("Z4 x Z2 x Z2", &[4, 2, 2]),
            ab("Z2 x Z2 x Z2 x Z2", &[2, 2, 2, 2]),
            other("D8 x Z2", direct_product(&dihedral(4), &abelian(&[2]))),
            other("Q8 x Z2", direct_product(&dicyclic(2), &abelian(&[2]))),
            other("D16", dihedral(8)),
            other("SD16", metacyclic(8, 2, 3)),
            other("Q16", dicyclic(4)),
            other("M16", metacyclic(8, 2, 5)),
            other("Z4 : Z4", metacyclic(4, 4, 3)),
            other("(Z4 x Z2) : Z2", z4z2_by_z2(|(a, b)| (a, (a + b) % 2))),
            other("Z4 o D8", z4z2_by_z2(|(a, b)| ((a + 2 * b) % 4, b))),
        ]
    })
}

pub fn identify_table(table: &CayleyTable) -> Result<GroupType, GroupError> {
    if table.order() > 16 {
        return Err(GroupError::TooLarge(table.order()));
    }
    reference_groups()
        .iter()
        .find(|r| table.isomorphism_to(&r.table).is_some())
        .map(|r| GroupType {
            label: r.label,
            order: table.order(),
        })
        .ok_or(GroupError::TooLarge(table.order()))
}

pub fn identify_isomorphism_type(g: &FiniteSubgroup) -> Result<GroupType, GroupError> {
    if g.order() > 16 {
        return Err(GroupError::TooLarge(g.order()));
    }
    identify_table(g.cayley_table())
}

/// Counts reference groups per order; used to sanity check the library.
pub fn reference_counts() -> HashMap<usize, usize> {
    let mut counts = HashMap::new();
    for r in reference_groups() {
        *counts.entry(r.table.order()).or_insert(0) += 1;
    }
    counts
}
