//! Finite groups as Cayley tables, and subgroups with left transversals.
//!
//! Element `0` is always the identity. Groups here are tiny (order below a
//! few dozen), so every operation works directly on the full table.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_CLOSURE_BOUND: usize = 512;
const EXHAUSTIVE_CHECK_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

/// Outcome of an exhaustive Cayley-table check.
#[derive(Clone, Debug, Serialize)]
pub struct CayleyReport {
    pub order: usize,
    pub triples_checked: usize,
    pub generated_by_generators: bool,
}

impl FiniteGroup {
    /// Validate a Cayley table; `table[a * n + b]` is the index of `a·b`.
    pub fn from_table(name: &str, order: usize, table: Vec<usize>, generators: Vec<usize>) -> Result<Self> {
        let g = Self::from_table_unchecked(name, order, table, generators)?;
        check_cayley(&g)?;
        Ok(g)
    }

    /// Build without the associativity check. Inverses are still derived
    /// from the table; a table without two-sided inverses is rejected.
    pub fn from_table_unchecked(name: &str, order: usize, table: Vec<usize>, generators: Vec<usize>) -> Result<Self> {
        if order == 0 || table.len() != order * order || table.iter().any(|&x| x >= order) {
            return Err(Error::ValidationFailure("malformed Cayley table".into()));
        }
        if generators.iter().any(|&x| x >= order) {
            return Err(Error::ValidationFailure("generator index out of range".into()));
        }
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            if let Some(b) = (0..order).find(|&b| table[a * order + b] == 0) {
                inverse[a] = b;
            }
        }
        if inverse.contains(&usize::MAX) {
            let a = inverse.iter().position(|&x| x == usize::MAX).unwrap();
            return Err(Error::ValidationFailure(format!("element {a} has no inverse")));
        }
        Ok(Self { name: name.to_string(), order, table, inverse, generators })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ValidationFailure("cyclic group of order 0".into()));
        }
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        Self::from_table(&format!("C{n}"), n, table, gens)
    }

    /// Dihedral group of order `2n`; element `i + n·j` is `r^i s^j`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::ValidationFailure("dihedral group needs n >= 2".into()));
        }
        let order = 2 * n;
        let mut table = vec![0; order * order];
        for x in 0..order {
            let (a, b) = (x % n, x / n);
            for y in 0..order {
                let (c, d) = (y % n, y / n);
                let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
                table[x * order + y] = rot + n * ((b + d) % 2);
            }
        }
        Self::from_table(&format!("D{n}"), order, table, vec![1, n])
    }

    /// `C2 × C2` with elements `e, a, b, ab` at indices `0..4`.
    pub fn klein_four() -> Self {
        let c2 = Self::cyclic(2).expect("C2");
        let mut v = Self::direct_product(&c2, &c2);
        v.name = "V4".into();
        v
    }

    /// Element `(i, j)` sits at index `i + |G1|·j`.
    pub fn direct_product(g1: &Self, g2: &Self) -> Self {
        let (n1, n2) = (g1.order, g2.order);
        let order = n1 * n2;
        let mut table = vec![0; order * order];
        for x in 0..order {
            for y in 0..order {
                let i = g1.mul(x % n1, y % n1);
                let j = g2.mul(x / n1, y / n1);
                table[x * order + y] = i + n1 * j;
            }
        }
        let mut gens: Vec<usize> = g1.generators.clone();
        gens.extend(g2.generators.iter().map(|&j| n1 * j));
        Self::from_table(&format!("{}x{}", g1.name, g2.name), order, table, gens)
            .expect("direct product of valid groups is a group")
    }

    /// Closure of permutations of `0..m`, given as image arrays. Composition
    /// applies the right factor first.
    pub fn from_permutations(perms: &[Vec<usize>], bound: usize) -> Result<Self> {
        let m = perms.first().map_or(0, |p| p.len());
        for p in perms {
            if p.len() != m {
                return Err(Error::InvalidPermutation("permutations act on different sets".into()));
            }
            let mut seen = vec![false; m];
            for &x in p {
                if x >= m || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidPermutation(format!("{p:?} is not a bijection")));
                }
            }
        }
        let compose = |s: &[usize], t: &[usize]| -> Vec<usize> { t.iter().map(|&i| s[i]).collect() };
        let id: Vec<usize> = (0..m).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for s in perms {
                let y = compose(s, &elems[x]);
                if !index.contains_key(&y) {
                    if elems.len() >= bound {
                        return Err(Error::ClosureBoundExceeded(bound));
                    }
                    index.insert(y.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(y);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&elems[a], &elems[b])];
            }
        }
        let mut gens = Vec::new();
        for p in perms {
            let g = index[p];
            if g != 0 && !gens.contains(&g) {
                gens.push(g);
            }
        }
        Self::from_table(&format!("Perm{n}"), n, table, gens)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Breadth-first spanning tree of the Cayley graph on the generators:
    /// for each element other than the identity, `(parent, generator)` with
    /// `element = generator · parent`.
    pub fn spanning_tree(&self) -> Vec<Option<(usize, usize)>> {
        let mut tree = vec![None; self.order];
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in &self.generators {
                let y = self.mul(s, x);
                if !seen[y] {
                    seen[y] = true;
                    tree[y] = Some((x, s));
                    queue.push_back(y);
                }
            }
        }
        tree
    }
}

/// Exhaustive associativity, identity, inverse and generation check.
pub fn check_cayley(g: &FiniteGroup) -> Result<CayleyReport> {
    let n = g.order;
    if n > EXHAUSTIVE_CHECK_LIMIT {
        return Err(Error::ValidationFailure(format!(
            "order {n} above exhaustive-check limit {EXHAUSTIVE_CHECK_LIMIT}"
        )));
    }
    for a in 0..n {
        if g.mul(0, a) != a || g.mul(a, 0) != a {
            return Err(Error::ValidationFailure(format!("0 is not an identity for {a}")));
        }
        let ai = g.inv(a);
        if g.mul(a, ai) != 0 || g.mul(ai, a) != 0 {
            return Err(Error::ValidationFailure(format!("{a} has no two-sided inverse")));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = g.mul(a, b);
            for c in 0..n {
                if g.mul(ab, c) != g.mul(a, g.mul(b, c)) {
                    return Err(Error::ValidationFailure(format!(
                        "associativity fails on ({a}, {b}, {c})"
                    )));
                }
            }
        }
    }
    let tree = g.spanning_tree();
    let generated = (1..n).all(|x| tree[x].is_some());
    if !generated {
        return Err(Error::ValidationFailure("generators do not generate the group".into()));
    }
    Ok(CayleyReport { order: n, triples_checked: n * n * n, generated_by_generators: generated })
}

/// A subgroup `H ≤ G` with its inclusion and left-coset data.
#[derive(Clone, Debug)]
pub struct SubgroupEmbedding {
    pub sub: FiniteGroup,
    /// sub index → parent index
    pub inject: Vec<usize>,
    /// left-coset representatives; `transversal[0] == 0`
    pub transversal: Vec<usize>,
    coset_of: Vec<usize>,
    parent_to_sub: Vec<Option<usize>>,
}

impl SubgroupEmbedding {
    pub fn index(&self) -> usize {
        self.transversal.len()
    }

    /// Left coset containing a parent element.
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    pub fn sub_index(&self, g: usize) -> Option<usize> {
        self.parent_to_sub[g]
    }

    /// For `g·t_i = t_j·h`, returns `(j, h)` with `h` as a subgroup index.
    pub fn decompose(&self, parent: &FiniteGroup, g: usize, i: usize) -> (usize, usize) {
        let x = parent.mul(g, self.transversal[i]);
        let j = self.coset_of[x];
        let h = parent.mul(parent.inv(self.transversal[j]), x);
        (j, self.parent_to_sub[h].expect("coset decomposition lands in subgroup"))
    }
}

/// The subgroup generated by `elems`, with lexicographically smallest
/// left-coset representatives.
pub fn subgroup_generated(g: &FiniteGroup, elems: &[usize]) -> Result<SubgroupEmbedding> {
    let n = g.order;
    if let Some(&bad) = elems.iter().find(|&&e| e >= n) {
        return Err(Error::ValidationFailure(format!("element {bad} not in group of order {n}")));
    }
    let mut inside = vec![false; n];
    inside[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &s in elems {
            let y = g.mul(s, x);
            if !inside[y] {
                inside[y] = true;
                queue.push_back(y);
            }
        }
    }
    let inject: Vec<usize> = (0..n).filter(|&x| inside[x]).collect();
    let m = inject.len();
    let mut parent_to_sub = vec![None; n];
    for (i, &x) in inject.iter().enumerate() {
        parent_to_sub[x] = Some(i);
    }
    let mut table = vec![0; m * m];
    for i in 0..m {
        for j in 0..m {
            table[i * m + j] = parent_to_sub[g.mul(inject[i], inject[j])].expect("closed");
        }
    }
    let mut gens = Vec::new();
    for &e in elems {
        let s = parent_to_sub[e].expect("generator lies in its closure");
        if s != 0 && !gens.contains(&s) {
            gens.push(s);
        }
    }
    let sub = FiniteGroup::from_table_unchecked(&format!("{}<{}>", g.name, m), m, table, gens)?;

    let mut coset_of = vec![usize::MAX; n];
    let mut transversal = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let c = transversal.len();
        transversal.push(x);
        for &h in &inject {
            coset_of[g.mul(x, h)] = c;
        }
    }
    Ok(SubgroupEmbedding { sub, inject, transversal, coset_of, parent_to_sub })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders(g: &FiniteGroup) -> Vec<usize> {
        let mut v: Vec<usize> = (0..g.order()).map(|a| g.element_order(a)).collect();
        v.sort();
        v
    }

    #[test]
    fn cyclic_and_klein_orders() {
        assert_eq!(orders(&FiniteGroup::cyclic(4).unwrap()), vec![1, 2, 4, 4]);
        assert_eq!(orders(&FiniteGroup::klein_four()), vec![1, 2, 2, 2]);
    }

    #[test]
    fn permutation_closure_gives_klein_four() {
        let g = FiniteGroup::from_permutations(&[vec![1, 0, 2, 3], vec![0, 1, 3, 2]], DEFAULT_CLOSURE_BOUND)
            .unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(orders(&g), orders(&FiniteGroup::klein_four()));
    }

    #[test]
    fn permutation_errors() {
        let s4 = [vec![1, 2, 3, 0], vec![1, 0, 2, 3]];
        assert!(matches!(FiniteGroup::from_permutations(&s4, 10), Err(Error::ClosureBoundExceeded(10))));
        assert_eq!(FiniteGroup::from_permutations(&s4, 512).unwrap().order(), 24);
        assert!(matches!(
            FiniteGroup::from_permutations(&[vec![0, 0, 1]], 512),
            Err(Error::InvalidPermutation(_))
        ));
    }

    #[test]
    fn check_cayley_passes_and_fails() {
        assert_eq!(check_cayley(&FiniteGroup::cyclic(6).unwrap()).unwrap().order, 6);
        let c2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(check_cayley(&FiniteGroup::direct_product(&c2, &c2)).unwrap().order, 4);

        let mut table: Vec<usize> = (0..9).map(|k| (k / 3 + k % 3) % 3).collect();
        table[1 * 3 + 1] = 0; // 1·1 should be 2
        let bad = FiniteGroup::from_table_unchecked("bad", 3, table, vec![1]);
        let err = bad.and_then(|g| check_cayley(&g).map(|_| ())).unwrap_err();
        assert!(matches!(err, Error::ValidationFailure(_)), "{err}");
    }

    #[test]
    fn dihedral_three_is_nonabelian_of_order_six() {
        let d = FiniteGroup::dihedral(3).unwrap();
        assert_eq!(d.order(), 6);
        assert_ne!(d.mul(1, 3), d.mul(3, 1));
        assert_eq!(orders(&d), vec![1, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn subgroup_examples() {
        let c4 = FiniteGroup::cyclic(4).unwrap();
        let h = subgroup_generated(&c4, &[2]).unwrap();
        assert_eq!((h.sub.order(), h.index()), (2, 2));

        let t = subgroup_generated(&c4, &[]).unwrap();
        assert_eq!(t.sub.order(), 1);
        assert_eq!(t.transversal, vec![0, 1, 2, 3]);

        let v = FiniteGroup::klein_four();
        let a = subgroup_generated(&v, &[1]).unwrap();
        assert_eq!(a.sub.order(), 2);
        assert_eq!(a.transversal, vec![0, 2]);
    }

    #[test]
    fn transversal_partitions_the_group() {
        let d = FiniteGroup::dihedral(4).unwrap();
        for gens in [vec![], vec![1], vec![4], vec![2, 4], vec![1, 4]] {
            let e = subgroup_generated(&d, &gens).unwrap();
            assert_eq!(e.index() * e.sub.order(), d.order());
            assert_eq!(e.transversal[0], 0);
            let mut count = vec![0; d.order()];
            for &t in &e.transversal {
                for &h in &e.inject {
                    count[d.mul(t, h)] += 1;
                }
            }
            assert!(count.iter().all(|&c| c == 1));
            for g in 0..d.order() {
                for i in 0..e.index() {
                    let (j, h) = e.decompose(&d, g, i);
                    assert_eq!(d.mul(g, e.transversal[i]), d.mul(e.transversal[j], e.inject[h]));
                }
            }
        }
    }
}
