//! Finite-dimensional kG-modules over a prime field.
//!
//! A [`GModule`] stores one action matrix per group element. Homomorphism
//! spaces are computed by spinning the source module up from a few seed
//! vectors, so the linear system has `seeds · dim(target)` unknowns instead of
//! `dim(source) · dim(target)`.

use std::sync::Arc;

use rand::Rng;
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, SubgroupEmbedding};
use crate::linalg::{kernel_basis, kronecker, solve_linear, Mat, PrimeField, RowSpace};

#[derive(Clone, Debug)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    field: PrimeField,
    dim: usize,
    action: Vec<Mat>,
}

#[derive(Clone, Debug)]
pub struct GModuleHom {
    pub src: Arc<GModule>,
    pub dst: Arc<GModule>,
    pub mat: Mat,
}

/// Block-diagonal sum with its structure maps.
#[derive(Clone, Debug)]
pub struct ModuleSum {
    pub module: Arc<GModule>,
    pub injections: Vec<GModuleHom>,
    pub projections: Vec<GModuleHom>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum NamedModule {
    Trivial,
    Regular,
    Jordan { size: usize },
}

/// Action-respecting recipes for seeded module generation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "recipe")]
pub enum Recipe {
    SubmoduleOfFree { rank: usize, vectors: usize },
    QuotientOfFree { rank: usize, vectors: usize },
    SumOfNamed { parts: usize },
}

impl GModule {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, g: usize) -> &Mat {
        &self.action[g]
    }

    /// Module from a full action table; checked against the Cayley table.
    pub fn from_table(group: Arc<FiniteGroup>, field: PrimeField, dim: usize, action: Vec<Mat>) -> Result<Self> {
        if action.len() != group.order() || action.iter().any(|a| a.shape() != (dim, dim)) {
            return Err(Error::DimensionMismatch("action table shape".into()));
        }
        let m = Self { group, field, dim, action };
        m.verify_relations()?;
        Ok(m)
    }

    fn verify_relations(&self) -> Result<()> {
        let g = &self.group;
        if self.action[0] != Mat::identity(self.field, self.dim) {
            return Err(Error::RelationViolation(0));
        }
        for &s in g.generators() {
            for x in 0..g.order() {
                if self.action[s].dot(&self.action[x]) != self.action[g.mul(s, x)] {
                    return Err(Error::RelationViolation(x));
                }
            }
        }
        Ok(())
    }

    pub fn zero(group: Arc<FiniteGroup>, field: PrimeField) -> Self {
        let action = vec![Mat::zeros(field, 0, 0); group.order()];
        Self { group, field, dim: 0, action }
    }
}

impl GModuleHom {
    /// Checked constructor: the matrix must intertwine on every generator.
    pub fn new(src: Arc<GModule>, dst: Arc<GModule>, mat: Mat) -> Result<Self> {
        if mat.shape() != (dst.dim, src.dim) {
            return Err(Error::DimensionMismatch(format!(
                "hom matrix {:?} for {} -> {}",
                mat.shape(),
                src.dim,
                dst.dim
            )));
        }
        let f = Self { src, dst, mat };
        if !f.intertwines() {
            return Err(Error::NotAMorphism("matrix does not intertwine the actions".into()));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(src: Arc<GModule>, dst: Arc<GModule>, mat: Mat) -> Self {
        debug_assert_eq!(mat.shape(), (dst.dim, src.dim));
        Self { src, dst, mat }
    }

    pub fn intertwines(&self) -> bool {
        self.src.group.generators().iter().all(|&s| {
            self.mat.dot(&self.src.action[s]) == self.dst.action[s].dot(&self.mat)
        })
    }

    pub fn identity(m: &Arc<GModule>) -> Self {
        Self::new_unchecked(m.clone(), m.clone(), Mat::identity(m.field, m.dim))
    }

    pub fn zero(src: &Arc<GModule>, dst: &Arc<GModule>) -> Self {
        Self::new_unchecked(src.clone(), dst.clone(), Mat::zeros(src.field, dst.dim, src.dim))
    }

    /// `self ∘ other`
    pub fn after(&self, other: &GModuleHom) -> GModuleHom {
        assert_eq!(other.dst.dim, self.src.dim);
        Self::new_unchecked(other.src.clone(), self.dst.clone(), self.mat.dot(&other.mat))
    }

    pub fn is_surjective(&self) -> bool {
        self.mat.rank() == self.dst.dim
    }
}

/// Build the full action table from generator matrices by word evaluation
/// along a breadth-first spanning tree of the Cayley graph.
pub fn module_from_action(group: Arc<FiniteGroup>, field: PrimeField, gens: &[Mat]) -> Result<GModule> {
    if gens.len() != group.generators().len() {
        return Err(Error::DimensionMismatch(format!(
            "{} generator matrices for {} generators",
            gens.len(),
            group.generators().len()
        )));
    }
    let dim = gens.first().map_or(0, |m| m.rows());
    for (i, m) in gens.iter().enumerate() {
        if m.shape() != (dim, dim) || m.field() != field {
            return Err(Error::DimensionMismatch(format!("generator matrix {i}")));
        }
        if !m.is_invertible() {
            return Err(Error::SingularMatrix(i));
        }
    }
    if group.order() > 1 && gens.is_empty() {
        return Err(Error::DimensionMismatch("no generator matrices".into()));
    }
    let mut action: Vec<Option<Mat>> = vec![None; group.order()];
    action[0] = Some(Mat::identity(field, dim));
    let tree = group.spanning_tree();
    // tree is in BFS discovery order only implicitly; walk until filled
    let mut remaining: Vec<usize> = (1..group.order()).collect();
    while !remaining.is_empty() {
        let before = remaining.len();
        remaining.retain(|&y| {
            let (x, s) = tree[y].expect("generators generate");
            match &action[x] {
                Some(ax) => {
                    let si = group.generators().iter().position(|&t| t == s).unwrap();
                    action[y] = Some(gens[si].dot(ax));
                    false
                }
                None => true,
            }
        });
        assert!(remaining.len() < before, "spanning tree is connected");
    }
    let action = action.into_iter().map(Option::unwrap).collect();
    GModule::from_table(group, field, dim, action)
}

pub fn trivial(group: &Arc<FiniteGroup>, field: PrimeField) -> GModule {
    GModule {
        group: group.clone(),
        field,
        dim: 1,
        action: vec![Mat::identity(field, 1); group.order()],
    }
}

fn permutation_matrix(field: PrimeField, images: &[usize]) -> Mat {
    let n = images.len();
    let mut m = Mat::zeros(field, n, n);
    for (i, &j) in images.iter().enumerate() {
        m.set(j, i, 1);
    }
    m
}

/// The regular module, with basis the group elements.
pub fn regular(group: &Arc<FiniteGroup>, field: PrimeField) -> GModule {
    let n = group.order();
    let action = (0..n)
        .map(|g| permutation_matrix(field, &(0..n).map(|x| group.mul(g, x)).collect::<Vec<_>>()))
        .collect();
    GModule { group: group.clone(), field, dim: n, action }
}

/// `k[x]/(x^s)` for a cyclic group, the generator acting as `1 + x`.
pub fn jordan(group: &Arc<FiniteGroup>, field: PrimeField, size: usize) -> Result<GModule> {
    let n = group.order();
    let cyclic = group.generators().len() == 1 && group.element_order(group.generators()[0]) == n;
    if !cyclic || n % field.p() as usize != 0 {
        return Err(Error::KindUnavailable(format!(
            "jordan modules need a cyclic group of order divisible by {} (got {})",
            field.p(),
            group.name()
        )));
    }
    if size == 0 || size > n {
        return Err(Error::KindUnavailable(format!("jordan size {size} outside 1..={n}")));
    }
    let mut g = Mat::identity(field, size);
    for i in 0..size - 1 {
        g.set(i + 1, i, 1);
    }
    module_from_action(group.clone(), field, &[g])
        .map_err(|_| Error::KindUnavailable(format!("jordan({size}) is not a {}-module", group.name())))
}

pub fn named_module(group: &Arc<FiniteGroup>, field: PrimeField, kind: NamedModule) -> Result<GModule> {
    match kind {
        NamedModule::Trivial => Ok(trivial(group, field)),
        NamedModule::Regular => Ok(regular(group, field)),
        NamedModule::Jordan { size } => jordan(group, field, size),
    }
}

/// Permutation module on the left cosets of a subgroup.
pub fn coset_permutation(group: &Arc<FiniteGroup>, field: PrimeField, emb: &SubgroupEmbedding) -> GModule {
    let action = (0..group.order())
        .map(|g| {
            let images: Vec<usize> =
                (0..emb.index()).map(|i| emb.coset_of(group.mul(g, emb.transversal[i]))).collect();
            permutation_matrix(field, &images)
        })
        .collect();
    GModule { group: group.clone(), field, dim: emb.index(), action }
}

pub fn restrict(m: &GModule, emb: &SubgroupEmbedding) -> GModule {
    GModule {
        group: Arc::new(emb.sub.clone()),
        field: m.field,
        dim: m.dim,
        action: emb.inject.iter().map(|&g| m.action[g].clone()).collect(),
    }
}

/// Induced module with basis `t_i ⊗ e_j` at index `i·dim(n) + j`.
pub fn induce(parent: &Arc<FiniteGroup>, emb: &SubgroupEmbedding, n: &GModule) -> GModule {
    let d = n.dim;
    let idx = emb.index();
    let action = (0..parent.order())
        .map(|g| {
            let mut a = Mat::zeros(n.field, idx * d, idx * d);
            for i in 0..idx {
                let (j, h) = emb.decompose(parent, g, i);
                a.set_block(j * d, i * d, &n.action[h]);
            }
            a
        })
        .collect();
    GModule { group: parent.clone(), field: n.field, dim: idx * d, action }
}

/// Counit `Ind Res m → m`, `t_i ⊗ v ↦ t_i·v`.
pub fn counit_hom(m: &Arc<GModule>, emb: &SubgroupEmbedding) -> GModuleHom {
    let ind = Arc::new(induce(&m.group, emb, &restrict(m, emb)));
    let d = m.dim;
    let mut mat = Mat::zeros(m.field, d, ind.dim);
    for (i, &t) in emb.transversal.iter().enumerate() {
        mat.set_block(0, i * d, &m.action[t]);
    }
    let f = GModuleHom::new_unchecked(ind, m.clone(), mat);
    debug_assert!(f.intertwines());
    f
}

/// Free module `kG ⊗ m` (action on the left factor) and the embedding
/// `v ↦ Σ_g g ⊗ g⁻¹v`.
pub fn free_embedding(m: &Arc<GModule>) -> (Arc<GModule>, GModuleHom) {
    let free = Arc::new(free_on(m));
    let g = &m.group;
    let d = m.dim;
    let mut mat = Mat::zeros(m.field, free.dim, d);
    for x in 0..g.order() {
        mat.set_block(x * d, 0, &m.action[g.inv(x)]);
    }
    (free.clone(), GModuleHom::new_unchecked(m.clone(), free, mat))
}

/// `kG ⊗ m ↠ m`, `g ⊗ v ↦ g·v`.
pub fn free_cover(m: &Arc<GModule>) -> (Arc<GModule>, GModuleHom) {
    let free = Arc::new(free_on(m));
    let d = m.dim;
    let mut mat = Mat::zeros(m.field, d, free.dim);
    for x in 0..m.group.order() {
        mat.set_block(0, x * d, &m.action[x]);
    }
    (free.clone(), GModuleHom::new_unchecked(free, m.clone(), mat))
}

fn free_on(m: &GModule) -> GModule {
    let reg = regular(&m.group, m.field);
    let id = Mat::identity(m.field, m.dim);
    let action = reg.action.iter().map(|a| kronecker(a, &id).expect("same field")).collect();
    GModule { group: m.group.clone(), field: m.field, dim: m.group.order() * m.dim, action }
}

pub fn direct_sum_modules(group: &Arc<FiniteGroup>, field: PrimeField, parts: &[Arc<GModule>]) -> ModuleSum {
    let dim: usize = parts.iter().map(|m| m.dim).sum();
    let action = (0..group.order())
        .map(|g| {
            let mut a = Mat::zeros(field, dim, dim);
            let mut off = 0;
            for m in parts {
                a.set_block(off, off, &m.action[g]);
                off += m.dim;
            }
            a
        })
        .collect();
    let module = Arc::new(GModule { group: group.clone(), field, dim, action });
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut off = 0;
    for m in parts {
        let mut inj = Mat::zeros(field, dim, m.dim);
        inj.set_block(off, 0, &Mat::identity(field, m.dim));
        projections.push(GModuleHom::new_unchecked(module.clone(), m.clone(), inj.transpose()));
        injections.push(GModuleHom::new_unchecked(m.clone(), module.clone(), inj));
        off += m.dim;
    }
    ModuleSum { module, injections, projections }
}

/// Kernel module on `kernel_basis` coordinates, with its inclusion.
pub fn kernel_with_inclusion(f: &GModuleHom) -> (Arc<GModule>, GModuleHom) {
    let basis = kernel_basis(&f.mat);
    let sub = Arc::new(submodule_on_basis(&f.src, &basis));
    let incl = GModuleHom::new_unchecked(sub.clone(), f.src.clone(), basis);
    debug_assert!(incl.intertwines());
    (sub, incl)
}

/// Submodule spanned by the columns of `basis`, which must be invariant and
/// carry an identity block at their free-variable rows.
fn submodule_on_basis(m: &Arc<GModule>, basis: &Mat) -> GModule {
    let k = basis.cols();
    let left = left_inverse(basis);
    let action = m.action.iter().map(|a| left.dot(&a.dot(basis))).collect();
    GModule { group: m.group.clone(), field: m.field, dim: k, action }
}

/// A left inverse of a full-column-rank matrix.
fn left_inverse(basis: &Mat) -> Mat {
    let k = basis.field();
    // L·B = I  ⇔  Bᵀ·Lᵀ = I
    solve_linear(&basis.transpose(), &Mat::identity(k, basis.cols()))
        .expect("shapes agree")
        .expect("full column rank")
        .transpose()
}

/// Vector-space cokernel of `a`: `(q, s)` with `q` the projection onto a
/// complement of the column space and `s` a section, `q·s = I`.
pub(crate) fn cokernel_maps(a: &Mat) -> (Mat, Mat) {
    let field = a.field();
    let n = a.rows();
    let image = RowSpace::span(&a.transpose());
    let mut is_pivot = vec![false; n];
    for &c in image.pivots() {
        is_pivot[c] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| !is_pivot[i]).collect();
    let mut q = Mat::zeros(field, rest.len(), n);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        let red = image.reduce(&e);
        for (r, &c) in rest.iter().enumerate() {
            q.set(r, i, red[c]);
        }
    }
    let mut s = Mat::zeros(field, n, rest.len());
    for (r, &c) in rest.iter().enumerate() {
        s.set(c, r, 1);
    }
    (q, s)
}

pub fn cokernel_with_projection(f: &GModuleHom) -> (Arc<GModule>, GModuleHom) {
    let (q, s) = cokernel_maps(&f.mat);
    let m = &f.dst;
    let action = m.action.iter().map(|a| q.dot(&a.dot(&s))).collect();
    let quot = Arc::new(GModule { group: m.group.clone(), field: m.field, dim: q.rows(), action });
    let proj = GModuleHom::new_unchecked(m.clone(), quot.clone(), q);
    debug_assert!(proj.intertwines());
    (quot, proj)
}

/// Standard basis obtained by spinning seed vectors under the generators.
struct Spin {
    /// (seed index, group element) per basis vector
    words: Vec<(usize, usize)>,
    seeds: usize,
    /// basis vectors as columns
    basis: Mat,
}

fn spin(m: &GModule) -> Spin {
    let field = m.field;
    let d = m.dim;
    let g = &m.group;
    let mut echelon = Echelon::new(field, d);
    let mut words = Vec::new();
    let mut vectors: Vec<Vec<u32>> = Vec::new();
    let mut seeds = 0;
    for e in 0..d {
        if vectors.len() == d {
            break;
        }
        let mut v = vec![0; d];
        v[e] = 1;
        if !echelon.insert(&v) {
            continue;
        }
        let seed = seeds;
        seeds += 1;
        let start = vectors.len();
        words.push((seed, 0));
        vectors.push(v);
        let mut cursor = start;
        while cursor < vectors.len() {
            let (_, x) = words[cursor];
            for &s in g.generators() {
                let y = g.mul(s, x);
                let w = m.action[s].apply(&vectors[cursor]);
                if echelon.insert(&w) {
                    words.push((seed, y));
                    vectors.push(w);
                }
            }
            cursor += 1;
        }
    }
    Spin { words, seeds, basis: Mat::from_columns(field, d, &vectors) }
}

/// Incrementally built, fully reduced echelon basis for membership tests.
struct Echelon {
    field: PrimeField,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    fn new(field: PrimeField, _n: usize) -> Self {
        Self { field, rows: Vec::new() }
    }

    fn insert(&mut self, v: &[u32]) -> bool {
        let k = self.field;
        let mut w = v.to_vec();
        for (pc, row) in &self.rows {
            let c = w[*pc];
            if c != 0 {
                let nc = k.neg(c);
                for (x, &r) in w.iter_mut().zip(row) {
                    if r != 0 {
                        *x = k.add(*x, k.mul(nc, r));
                    }
                }
            }
        }
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = k.inv(w[pc]);
        w.iter_mut().for_each(|x| *x = k.mul(*x, inv));
        for (_, row) in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                let nc = k.neg(c);
                for (x, &r) in row.iter_mut().zip(&w) {
                    if r != 0 {
                        *x = k.add(*x, k.mul(nc, r));
                    }
                }
            }
        }
        self.rows.push((pc, w));
        true
    }
}

/// Basis of `Hom_kG(m, n)` in canonical (row-reduced, row-major) form.
pub fn hom_basis(m: &Arc<GModule>, n: &Arc<GModule>) -> Vec<GModuleHom> {
    let field = m.field;
    let (dm, dn) = (m.dim, n.dim);
    if dm == 0 || dn == 0 {
        return Vec::new();
    }
    let g = &m.group;
    let sp = spin(m);
    let binv = sp.basis.inverse().expect("spun basis is a basis");
    let unknowns = sp.seeds * dn;
    let gens = g.generators();
    let mut system = Mat::zeros(field, gens.len() * dm * dn, unknowns);
    let mut row0 = 0;
    for &t in gens {
        // coefficients of t·b_j in the spun basis
        let coeffs = binv.dot(&m.action[t].dot(&sp.basis));
        for j in 0..dm {
            let (sj, gj) = sp.words[j];
            let mut block = vec![Mat::zeros(field, dn, dn); sp.seeds];
            for (k, &(sk, gk)) in sp.words.iter().enumerate() {
                let c = coeffs.get(k, j);
                if c != 0 {
                    block[sk] = block[sk].add(&n.action[gk].scale(c));
                }
            }
            block[sj] = block[sj].sub(&n.action[g.mul(t, gj)]);
            for (s, b) in block.iter().enumerate() {
                system.set_block(row0, s * dn, b);
            }
            row0 += dn;
        }
    }
    let sols = kernel_basis(&system);
    let mut vectors = Vec::with_capacity(sols.cols());
    for c in 0..sols.cols() {
        let u = sols.column(c);
        let mut fb = Mat::zeros(field, dn, dm);
        for (j, &(sj, gj)) in sp.words.iter().enumerate() {
            let img = n.action[gj].apply(&u[sj * dn..(sj + 1) * dn]);
            for (a, &v) in img.iter().enumerate() {
                fb.set(a, j, v);
            }
        }
        vectors.push(fb.dot(&binv).entries().to_vec());
    }
    let space = RowSpace::from_vectors(field, dn * dm, &vectors);
    (0..space.dim())
        .map(|i| {
            let mat = Mat::from_vec(field, dn, dm, space.basis().row(i).to_vec()).unwrap();
            GModuleHom::new_unchecked(m.clone(), n.clone(), mat)
        })
        .collect()
}

/// Intertwiners from the full Kronecker system `ρ_n(g)F − Fρ_m(g) = 0`.
pub fn hom_basis_kronecker(m: &Arc<GModule>, n: &Arc<GModule>) -> Vec<GModuleHom> {
    let field = m.field;
    let (dm, dn) = (m.dim, n.dim);
    if dm == 0 || dn == 0 {
        return Vec::new();
    }
    let gens = m.group.generators();
    let size = dm * dn;
    let mut system = Mat::zeros(field, gens.len() * size, size);
    let idm = Mat::identity(field, dm);
    let idn = Mat::identity(field, dn);
    for (i, &s) in gens.iter().enumerate() {
        // row-major vec(F): vec(A F) = (A ⊗ I) vec F, vec(F B) = (I ⊗ Bᵀ) vec F
        let left = kronecker(&n.action[s], &idm).unwrap();
        let right = kronecker(&idn, &m.action[s].transpose()).unwrap();
        system.set_block(i * size, 0, &left.sub(&right));
    }
    let ker = kernel_basis(&system);
    let vectors: Vec<Vec<u32>> = (0..ker.cols()).map(|c| ker.column(c)).collect();
    let space = RowSpace::from_vectors(field, size, &vectors);
    (0..space.dim())
        .map(|i| {
            let mat = Mat::from_vec(field, dn, dm, space.basis().row(i).to_vec()).unwrap();
            GModuleHom::new_unchecked(m.clone(), n.clone(), mat)
        })
        .collect()
}

/// Entries at `positions` (row-major indices into a `dim n × dim m` matrix)
/// of the transfers `Σ_g ρ_n(g) E_ij ρ_m(g⁻¹)` over all matrix units.
pub(crate) fn transfer_coords(m: &GModule, n: &GModule, positions: &[usize]) -> Vec<Vec<u32>> {
    let field = m.field;
    let (dm, dn) = (m.dim, n.dim);
    let g = &m.group;
    let p = field.p() as u64;
    let mut out = Vec::with_capacity(dm * dn);
    for i in 0..dn {
        for j in 0..dm {
            let v: Vec<u32> = positions
                .iter()
                .map(|&pos| {
                    let (a, b) = (pos / dm, pos % dm);
                    let s: u64 = (0..g.order())
                        .map(|x| (n.action[x].get(a, i) * m.action[g.inv(x)].get(j, b)) as u64)
                        .sum();
                    (s % p) as u32
                })
                .collect();
            out.push(v);
        }
    }
    out
}

/// Seeded module generation; every recipe respects the action.
pub fn random_module(group: &Arc<FiniteGroup>, field: PrimeField, recipe: &Recipe, seed: u64) -> GModule {
    use rand::SeedableRng;
    let mut rng = SplitMix64::seed_from_u64(seed);
    random_module_with(group, field, recipe, &mut rng)
}

pub(crate) fn random_module_with(
    group: &Arc<FiniteGroup>,
    field: PrimeField,
    recipe: &Recipe,
    rng: &mut SplitMix64,
) -> GModule {
    let free_of_rank = |rank: usize| {
        let reg = Arc::new(regular(group, field));
        direct_sum_modules(group, field, &vec![reg; rank]).module
    };
    match *recipe {
        Recipe::SubmoduleOfFree { rank, vectors } => {
            let free = free_of_rank(rank);
            let basis = closure_of_random(&free, vectors, rng);
            submodule_on_echelon(&free, &basis)
        }
        Recipe::QuotientOfFree { rank, vectors } => {
            let free = free_of_rank(rank);
            let basis = closure_of_random(&free, vectors, rng);
            let incl = GModuleHom::new_unchecked(
                Arc::new(submodule_on_echelon(&free, &basis)),
                free.clone(),
                basis.basis().transpose(),
            );
            let (q, _) = cokernel_with_projection(&incl);
            Arc::try_unwrap(q).unwrap_or_else(|a| (*a).clone())
        }
        Recipe::SumOfNamed { parts } => {
            let mut menu = vec![NamedModule::Trivial, NamedModule::Regular];
            for s in 2..group.order() {
                if jordan(group, field, s).is_ok() {
                    menu.push(NamedModule::Jordan { size: s });
                }
            }
            let chosen: Vec<Arc<GModule>> = (0..parts.max(1))
                .map(|_| {
                    let kind = menu[rng.gen_range(0..menu.len())];
                    Arc::new(named_module(group, field, kind).expect("menu kinds exist"))
                })
                .collect();
            let m = direct_sum_modules(group, field, &chosen).module;
            Arc::try_unwrap(m).unwrap_or_else(|a| (*a).clone())
        }
    }
}

fn closure_of_random(m: &GModule, count: usize, rng: &mut SplitMix64) -> RowSpace {
    let p = m.field.p();
    let mut vectors: Vec<Vec<u32>> = Vec::new();
    let mut ech = Echelon::new(m.field, m.dim);
    let mut queue: Vec<Vec<u32>> = (0..count)
        .map(|_| (0..m.dim).map(|_| rng.gen_range(0..p)).collect())
        .collect();
    while let Some(v) = queue.pop() {
        if ech.insert(&v) {
            for &s in m.group.generators() {
                queue.push(m.action[s].apply(&v));
            }
            vectors.push(v);
        }
    }
    RowSpace::from_vectors(m.field, m.dim, &vectors)
}

fn submodule_on_echelon(m: &GModule, space: &RowSpace) -> GModule {
    let basis = space.basis().transpose();
    // echelon rows carry an identity at the pivots, so reading a member
    // vector at the pivots gives its coordinates
    let mut left = Mat::zeros(m.field, space.dim(), m.dim);
    for (i, &pc) in space.pivots().iter().enumerate() {
        left.set(i, pc, 1);
    }
    let action = m.action.iter().map(|a| left.dot(&a.dot(&basis))).collect();
    GModule { group: m.group.clone(), field: m.field, dim: space.dim(), action }
}

/// Whether two modules are isomorphic, found by searching the hom space for
/// an invertible map. Deterministic but incomplete for large hom spaces:
/// only basis elements and their pairwise sums are tried, then a seeded
/// random search.
pub fn find_isomorphism(a: &Arc<GModule>, b: &Arc<GModule>) -> Option<GModuleHom> {
    if a.dim != b.dim {
        return None;
    }
    if a.dim == 0 {
        return Some(GModuleHom::zero(a, b));
    }
    let basis = hom_basis(a, b);
    let field = a.field;
    let mut candidates: Vec<Mat> = basis.iter().map(|f| f.mat.clone()).collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            candidates.push(basis[i].mat.add(&basis[j].mat));
        }
    }
    use rand::SeedableRng;
    let mut rng = SplitMix64::seed_from_u64(0x5eed);
    for _ in 0..64 {
        let mut m = Mat::zeros(field, b.dim, a.dim);
        for f in &basis {
            m = m.add(&f.mat.scale(rng.gen_range(0..field.p())));
        }
        candidates.push(m);
    }
    candidates
        .into_iter()
        .find(|m| m.is_invertible())
        .map(|m| GModuleHom::new_unchecked(a.clone(), b.clone(), m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::subgroup_generated;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn c(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n).unwrap())
    }

    #[test]
    fn module_from_action_examples() {
        let k = f2();
        let swap = Mat::from_rows(k, &[[0, 1], [1, 0]]).unwrap();
        let m = module_from_action(c(2), k, &[swap.clone()]).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.action(1), &swap);

        let j2 = Mat::from_rows(k, &[[1, 0], [1, 1]]).unwrap();
        assert_eq!(module_from_action(c(4), k, &[j2]).unwrap().dim(), 2);

        let sing = Mat::from_rows(k, &[[1, 1], [1, 1]]).unwrap();
        assert!(matches!(module_from_action(c(2), k, &[sing]), Err(Error::SingularMatrix(0))));

        // an order-3 matrix cannot represent the generator of C2
        let bad = Mat::from_rows(k, &[[0, 1], [1, 1]]).unwrap();
        assert!(matches!(module_from_action(c(2), k, &[bad]), Err(Error::RelationViolation(_))));
    }

    #[test]
    fn named_module_examples() {
        let k = f2();
        let reg = regular(&c(2), k);
        assert_eq!(reg.action(1), &Mat::from_rows(k, &[[0, 1], [1, 0]]).unwrap());

        let g = c(4);
        let j4 = Arc::new(jordan(&g, k, 4).unwrap());
        let r4 = Arc::new(regular(&g, k));
        assert!(find_isomorphism(&j4, &r4).is_some());

        let v = Arc::new(FiniteGroup::klein_four());
        let a = subgroup_generated(&v, &[1]).unwrap();
        let cp = coset_permutation(&v, k, &a);
        assert_eq!(cp.dim(), 2);
        assert_eq!(cp.action(1), &Mat::identity(k, 2));
        assert_eq!(cp.action(2), &Mat::from_rows(k, &[[0, 1], [1, 0]]).unwrap());

        assert!(matches!(jordan(&c(3), k, 2), Err(Error::KindUnavailable(_))));
        assert!(matches!(jordan(&v, k, 2), Err(Error::KindUnavailable(_))));
        assert!(jordan(&c(6), k, 3).is_err());
    }

    #[test]
    fn restriction_examples() {
        let k = f2();
        let g = c(4);
        let h = subgroup_generated(&g, &[2]).unwrap();
        let res = restrict(&regular(&g, k), &h);
        assert_eq!(res.dim(), 4);
        let two_reg = direct_sum_modules(
            &Arc::new(h.sub.clone()),
            k,
            &[Arc::new(regular(&Arc::new(h.sub.clone()), k)), Arc::new(regular(&Arc::new(h.sub.clone()), k))],
        );
        assert!(find_isomorphism(&Arc::new(res), &two_reg.module).is_some());

        let triv = restrict(&trivial(&g, k), &h);
        assert_eq!(triv.dim(), 1);
        let t = subgroup_generated(&g, &[]).unwrap();
        let r = restrict(&jordan(&g, k, 3).unwrap(), &t);
        assert_eq!((r.dim(), r.action.len()), (3, 1));
    }

    #[test]
    fn induction_examples() {
        let k = f2();
        let g = c(4);
        let h = subgroup_generated(&g, &[2]).unwrap();
        let hsub = Arc::new(h.sub.clone());
        assert_eq!(induce(&g, &h, &trivial(&hsub, k)).dim(), 2);

        let t = subgroup_generated(&g, &[]).unwrap();
        let ind = Arc::new(induce(&g, &t, &trivial(&Arc::new(t.sub.clone()), k)));
        assert!(find_isomorphism(&ind, &Arc::new(regular(&g, k))).is_some());

        let v = Arc::new(FiniteGroup::klein_four());
        let a = subgroup_generated(&v, &[1]).unwrap();
        let ind = induce(&v, &a, &trivial(&Arc::new(a.sub.clone()), k));
        let cp = coset_permutation(&v, k, &a);
        for x in 0..4 {
            assert_eq!(ind.action(x), cp.action(x));
        }
    }

    #[test]
    fn counit_examples() {
        let k = f2();
        let g = c(4);
        let h = subgroup_generated(&g, &[2]).unwrap();
        let triv = Arc::new(trivial(&g, k));
        let eps = counit_hom(&triv, &h);
        assert_eq!(eps.mat.shape(), (1, 2));
        assert_eq!(eps.mat.rank(), 1);
        let (ker, _) = kernel_with_inclusion(&eps);
        assert_eq!(ker.dim(), 1);
        assert_eq!(ker.action(1), &Mat::identity(k, 1));

        let whole = subgroup_generated(&g, &[1]).unwrap();
        let m = Arc::new(jordan(&g, k, 3).unwrap());
        let eps = counit_hom(&m, &whole);
        assert!(eps.mat.is_invertible());
    }

    #[test]
    fn hom_basis_examples() {
        let k = f2();
        let r2 = Arc::new(regular(&c(2), k));
        assert_eq!(hom_basis(&r2, &r2).len(), 2);
        let t = Arc::new(trivial(&c(2), k));
        assert_eq!(hom_basis(&t, &t).len(), 1);
        let g = c(4);
        let j2 = Arc::new(jordan(&g, k, 2).unwrap());
        let j3 = Arc::new(jordan(&g, k, 3).unwrap());
        assert_eq!(hom_basis(&j2, &j3).len(), 2);
    }

    #[test]
    fn spin_and_kronecker_routes_agree() {
        let k = PrimeField::new(3).unwrap();
        let s3 = Arc::new(FiniteGroup::dihedral(3).unwrap());
        let h = subgroup_generated(&s3, &[3]).unwrap();
        let mods: Vec<Arc<GModule>> = vec![
            Arc::new(trivial(&s3, k)),
            Arc::new(regular(&s3, k)),
            Arc::new(coset_permutation(&s3, k, &h)),
            Arc::new(random_module(&s3, k, &Recipe::SubmoduleOfFree { rank: 1, vectors: 1 }, 3)),
        ];
        for a in &mods {
            for b in &mods {
                let x: Vec<Mat> = hom_basis(a, b).into_iter().map(|f| f.mat).collect();
                let y: Vec<Mat> = hom_basis_kronecker(a, b).into_iter().map(|f| f.mat).collect();
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn kernel_and_cokernel_examples() {
        let k = f2();
        let g = c(2);
        let reg = Arc::new(regular(&g, k));
        let (ker, _) = kernel_with_inclusion(&GModuleHom::identity(&reg));
        assert_eq!(ker.dim(), 0);
        let (ker, _) = kernel_with_inclusion(&GModuleHom::zero(&reg, &reg));
        assert_eq!(ker.dim(), 2);
        let (cok, _) = cokernel_with_projection(&GModuleHom::identity(&reg));
        assert_eq!(cok.dim(), 0);
        let (cok, _) = cokernel_with_projection(&GModuleHom::zero(&reg, &reg));
        assert_eq!(cok.dim(), 2);

        let triv = Arc::new(trivial(&g, k));
        let socle = GModuleHom::new(triv.clone(), reg.clone(), Mat::from_rows(k, &[[1], [1]]).unwrap()).unwrap();
        let (cok, proj) = cokernel_with_projection(&socle);
        assert_eq!(cok.dim(), 1);
        assert_eq!(cok.action(1), &Mat::identity(k, 1));
        assert!(proj.after(&socle).mat.is_zero());
    }

    #[test]
    fn direct_sum_examples() {
        let k = f2();
        let g = c(4);
        assert_eq!(direct_sum_modules(&g, k, &[]).module.dim(), 0);
        let j3 = Arc::new(jordan(&g, k, 3).unwrap());
        let one = direct_sum_modules(&g, k, &[j3.clone()]);
        assert_eq!(one.injections[0].mat, Mat::identity(k, 3));
        let j2 = Arc::new(jordan(&g, k, 2).unwrap());
        let two = direct_sum_modules(&g, k, &[j2, j3]);
        assert_eq!(two.module.dim(), 5);
        for (i, p) in two.projections.iter().enumerate() {
            for (j, e) in two.injections.iter().enumerate() {
                let comp = p.after(e).mat;
                assert_eq!(comp.is_zero(), i != j);
            }
        }
    }

    #[test]
    fn random_modules() {
        let k = f2();
        let g = c(4);
        let r = Recipe::SubmoduleOfFree { rank: 1, vectors: 1 };
        for seed in 0..20 {
            let m = random_module(&g, k, &r, seed);
            assert!((0..=4).contains(&m.dim()));
            assert!(m.verify_relations().is_ok());
            let again = random_module(&g, k, &r, seed);
            assert_eq!(m.action, again.action);
            // cyclic submodules of kC4 are uniserial: J_dim
            if m.dim() > 0 {
                let j = Arc::new(jordan(&g, k, m.dim()).unwrap());
                assert!(find_isomorphism(&Arc::new(m), &j).is_some());
            }
        }
        let q = random_module(&g, k, &Recipe::QuotientOfFree { rank: 1, vectors: 0 }, 9);
        assert!(find_isomorphism(&Arc::new(q), &Arc::new(regular(&g, k))).is_some());
        let s = random_module(&g, k, &Recipe::SumOfNamed { parts: 3 }, 4);
        assert!(s.verify_relations().is_ok());
    }

    #[test]
    fn free_embedding_and_cover_are_morphisms() {
        let k = PrimeField::new(3).unwrap();
        let s3 = Arc::new(FiniteGroup::dihedral(3).unwrap());
        let h = subgroup_generated(&s3, &[1]).unwrap();
        let m = Arc::new(coset_permutation(&s3, k, &h));
        let (free, iota) = free_embedding(&m);
        assert!(iota.intertwines());
        assert_eq!(free.dim(), 12);
        assert_eq!(iota.mat.rank(), 2);
        let (_, pi) = free_cover(&m);
        assert!(pi.intertwines());
        assert!(pi.is_surjective());
    }
}
