//! Bounded chain complexes of `F_p` vector spaces.
//!
//! Complexes live in the fixed degree window `[MIN_DEGREE, MAX_DEGREE]`,
//! differentials go down (`d_i: X_i → X_{i-1}`), and every component outside
//! the window is zero. Contractible complexes are the projective-injectives
//! of the degreewise-split exact structure.

use std::sync::Arc;

use rand::Rng;
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, solve_linear, Mat, PrimeField, RowSpace};
use crate::modctx::cokernel_maps;

pub const MIN_DEGREE: i32 = -8;
pub const MAX_DEGREE: i32 = 8;
pub const SLOTS: usize = (MAX_DEGREE - MIN_DEGREE + 1) as usize;

#[inline]
fn slot(deg: i32) -> Option<usize> {
    (MIN_DEGREE..=MAX_DEGREE).contains(&deg).then(|| (deg - MIN_DEGREE) as usize)
}

#[inline]
fn degree(slot: usize) -> i32 {
    slot as i32 + MIN_DEGREE
}

fn window_error() -> Error {
    Error::WindowExceeded { lo: MIN_DEGREE, hi: MAX_DEGREE }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FComplex {
    field: PrimeField,
    dims: Vec<usize>,
    /// `diffs[s]` is the differential leaving slot `s`
    diffs: Vec<Mat>,
}

#[derive(Clone, Debug)]
pub struct ChainMap {
    pub src: Arc<FComplex>,
    pub dst: Arc<FComplex>,
    pub comps: Vec<Mat>,
}

#[derive(Clone, Debug)]
pub struct ComplexSum {
    pub complex: Arc<FComplex>,
    pub injections: Vec<ChainMap>,
    pub projections: Vec<ChainMap>,
}

impl FComplex {
    pub fn zero(field: PrimeField) -> Self {
        Self::from_slots(field, vec![0; SLOTS], None)
    }

    fn from_slots(field: PrimeField, dims: Vec<usize>, diffs: Option<Vec<Mat>>) -> Self {
        let diffs = diffs.unwrap_or_else(|| {
            (0..SLOTS)
                .map(|s| Mat::zeros(field, if s == 0 { 0 } else { dims[s - 1] }, dims[s]))
                .collect()
        });
        Self { field, dims, diffs }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Dimension in degree `deg` (zero outside the window).
    pub fn dim_at(&self, deg: i32) -> usize {
        slot(deg).map_or(0, |s| self.dims[s])
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Differential `X_deg → X_{deg-1}`.
    pub fn d(&self, deg: i32) -> Mat {
        match slot(deg) {
            Some(s) => self.diffs[s].clone(),
            None => Mat::zeros(self.field, self.dim_at(deg - 1), self.dim_at(deg)),
        }
    }

    /// Smallest degree range holding every nonzero component.
    pub fn support(&self) -> Option<(i32, i32)> {
        let lo = self.dims.iter().position(|&d| d > 0)?;
        let hi = self.dims.iter().rposition(|&d| d > 0)?;
        Some((degree(lo), degree(hi)))
    }

    pub fn slot_dims(&self) -> &[usize] {
        &self.dims
    }
}

/// Validated complex from component dimensions over `lo..=lo+len-1` and the
/// differentials leaving each degree (`diffs[i]` leaves degree `lo + i`;
/// the one leaving `lo` must map to the zero space).
pub fn complex_from_data(field: PrimeField, lo: i32, dims: &[usize], diffs: &[Mat]) -> Result<FComplex> {
    let hi = lo + dims.len() as i32 - 1;
    if !dims.is_empty() && (slot(lo).is_none() || slot(hi).is_none()) {
        return Err(window_error());
    }
    if diffs.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} differentials for {} degrees",
            diffs.len(),
            dims.len()
        )));
    }
    let mut all = vec![0; SLOTS];
    for (i, &d) in dims.iter().enumerate() {
        all[slot(lo + i as i32).unwrap()] = d;
    }
    let mut x = FComplex::from_slots(field, all, None);
    for (i, m) in diffs.iter().enumerate() {
        let deg = lo + i as i32;
        let expect = (x.dim_at(deg - 1), x.dim_at(deg));
        if m.shape() != expect || m.field() != field {
            return Err(Error::DimensionMismatch(format!(
                "differential at degree {deg} has shape {:?}, expected {expect:?}",
                m.shape()
            )));
        }
        x.diffs[slot(deg).unwrap()] = m.clone();
    }
    check_square_zero(&x)?;
    Ok(x)
}

fn check_square_zero(x: &FComplex) -> Result<()> {
    for s in 1..SLOTS {
        if !x.diffs[s - 1].dot(&x.diffs[s]).is_zero() {
            return Err(Error::SquareNonzero { degree: degree(s) });
        }
    }
    Ok(())
}

/// `S(i)`: one copy of the field in degree `i`.
pub fn sphere(field: PrimeField, i: i32) -> Result<FComplex> {
    complex_from_data(field, i, &[1], &[Mat::zeros(field, 0, 1)])
}

/// `D(i)`: the field in degrees `i` and `i-1` with identity differential.
pub fn disk(field: PrimeField, i: i32) -> Result<FComplex> {
    complex_from_data(field, i - 1, &[1, 1], &[Mat::zeros(field, 0, 1), Mat::identity(field, 1)])
}

pub fn homology_dims(x: &FComplex) -> Vec<(i32, usize)> {
    (0..SLOTS)
        .map(|s| {
            let deg = degree(s);
            let ker = x.dims[s] - x.diffs[s].rank();
            let im = if s + 1 < SLOTS { x.diffs[s + 1].rank() } else { 0 };
            (deg, ker - im)
        })
        .collect()
}

pub fn homology_at(x: &FComplex, deg: i32) -> usize {
    match slot(deg) {
        Some(s) => homology_dims(x)[s].1,
        None => 0,
    }
}

impl ChainMap {
    pub fn new(src: Arc<FComplex>, dst: Arc<FComplex>, comps: Vec<Mat>) -> Result<Self> {
        if comps.len() != SLOTS {
            return Err(Error::DimensionMismatch("chain map needs one component per degree".into()));
        }
        for (s, c) in comps.iter().enumerate() {
            if c.shape() != (dst.dims[s], src.dims[s]) {
                return Err(Error::DimensionMismatch(format!("component at degree {}", degree(s))));
            }
        }
        let f = Self { src, dst, comps };
        if !f.is_chain_map() {
            return Err(Error::NotAMorphism("chain condition fails".into()));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(src: Arc<FComplex>, dst: Arc<FComplex>, comps: Vec<Mat>) -> Self {
        Self { src, dst, comps }
    }

    pub fn is_chain_map(&self) -> bool {
        (1..SLOTS).all(|s| self.dst.diffs[s].dot(&self.comps[s]) == self.comps[s - 1].dot(&self.src.diffs[s]))
    }

    pub fn identity(x: &Arc<FComplex>) -> Self {
        let comps = x.dims.iter().map(|&d| Mat::identity(x.field, d)).collect();
        Self::new_unchecked(x.clone(), x.clone(), comps)
    }

    pub fn zero(x: &Arc<FComplex>, y: &Arc<FComplex>) -> Self {
        let comps = (0..SLOTS).map(|s| Mat::zeros(x.field, y.dims[s], x.dims[s])).collect();
        Self::new_unchecked(x.clone(), y.clone(), comps)
    }

    /// `self ∘ other`
    pub fn after(&self, other: &ChainMap) -> ChainMap {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.dot(b)).collect();
        Self::new_unchecked(other.src.clone(), self.dst.clone(), comps)
    }

    pub fn component(&self, deg: i32) -> Option<&Mat> {
        slot(deg).map(|s| &self.comps[s])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Mat::is_zero)
    }

    pub fn is_degreewise_surjective(&self) -> bool {
        self.comps.iter().zip(&self.dst.dims).all(|(c, &d)| c.rank() == d)
    }

    pub fn flatten(&self) -> Vec<u32> {
        self.comps.iter().flat_map(|c| c.entries().iter().copied()).collect()
    }

    pub fn from_flat(src: &Arc<FComplex>, dst: &Arc<FComplex>, v: &[u32]) -> Self {
        let mut off = 0;
        let comps = (0..SLOTS)
            .map(|s| {
                let (r, c) = (dst.dims[s], src.dims[s]);
                let m = Mat::from_vec(src.field, r, c, v[off..off + r * c].to_vec()).unwrap();
                off += r * c;
                m
            })
            .collect();
        Self::new_unchecked(src.clone(), dst.clone(), comps)
    }
}

fn ambient_offsets(x: &FComplex, y: &FComplex) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(SLOTS);
    let mut total = 0;
    for s in 0..SLOTS {
        offs.push(total);
        total += x.dims[s] * y.dims[s];
    }
    (offs, total)
}

/// Basis of chain maps `x → y` from one linear system in all components,
/// returned in canonical row-reduced form.
pub fn chain_hom_basis(x: &Arc<FComplex>, y: &Arc<FComplex>) -> Vec<ChainMap> {
    let field = x.field;
    let (offs, total) = ambient_offsets(x, y);
    if total == 0 {
        return Vec::new();
    }
    let rows: usize = (1..SLOTS).map(|s| y.dims[s - 1] * x.dims[s]).sum();
    let mut sys = Mat::zeros(field, rows, total);
    let mut r0 = 0;
    for s in 1..SLOTS {
        // d^Y_s f_s − f_{s-1} d^X_s = 0, entry (a, b) for a < dy_{s-1}, b < dx_s
        let (dya, dxb) = (y.dims[s - 1], x.dims[s]);
        if dya == 0 || dxb == 0 {
            continue;
        }
        let dy = &y.diffs[s];
        let dx = &x.diffs[s];
        let (xs, ys) = (x.dims[s], y.dims[s]);
        let xprev = x.dims[s - 1];
        for a in 0..dya {
            for b in 0..dxb {
                let row = r0 + a * dxb + b;
                // Σ_c dy[a][c] f_s[c][b]
                for c in 0..ys {
                    let v = dy.get(a, c);
                    if v != 0 {
                        sys.set(row, offs[s] + c * xs + b, v);
                    }
                }
                // − Σ_c f_{s-1}[a][c] dx[c][b]
                for c in 0..xprev {
                    let v = dx.get(c, b);
                    if v != 0 {
                        let col = offs[s - 1] + a * xprev + c;
                        let cur = sys.get(row, col);
                        sys.set(row, col, field.sub(cur, v));
                    }
                }
            }
        }
        r0 += dya * dxb;
    }
    let ker = kernel_basis(&sys);
    let vectors: Vec<Vec<u32>> = (0..ker.cols()).map(|c| ker.column(c)).collect();
    let space = RowSpace::from_vectors(field, total, &vectors);
    (0..space.dim()).map(|i| ChainMap::from_flat(x, y, space.basis().row(i))).collect()
}

/// Maps `d·h + h·d` for every elementary homotopy `h: X_i → Y_{i+1}`; these
/// span the nullhomotopic chain maps.
pub fn elementary_nullhomotopic(x: &Arc<FComplex>, y: &Arc<FComplex>) -> Vec<ChainMap> {
    let field = x.field;
    let mut out = Vec::new();
    for s in 0..SLOTS - 1 {
        // h: X_s → Y_{s+1}
        for a in 0..y.dims[s + 1] {
            for b in 0..x.dims[s] {
                let mut f = ChainMap::zero(x, y);
                // component s: d^Y_{s+1} h
                let dy = &y.diffs[s + 1];
                for r in 0..y.dims[s] {
                    let v = dy.get(r, a);
                    if v != 0 {
                        f.comps[s].set(r, b, v);
                    }
                }
                // component s+1: h d^X_{s+1}
                let dx = &x.diffs[s + 1];
                for c in 0..x.dims[s + 1] {
                    let v = dx.get(b, c);
                    if v != 0 {
                        let cur = f.comps[s + 1].get(a, c);
                        f.comps[s + 1].set(a, c, field.add(cur, v));
                    }
                }
                out.push(f);
            }
        }
    }
    out
}

/// A homotopy `h` (components `X_i → Y_{i+1}`, indexed by the source
/// degree) with `f = d·h + h·d`, if one exists.
pub fn nullhomotopy_solve(f: &ChainMap) -> Option<Vec<Mat>> {
    let (x, y) = (&f.src, &f.dst);
    let field = x.field;
    let gens = elementary_nullhomotopic(x, y);
    let (_, total) = ambient_offsets(x, y);
    if total == 0 {
        return Some((0..SLOTS).map(|s| Mat::zeros(field, y.dim_at(degree(s) + 1), x.dims[s])).collect());
    }
    let cols: Vec<Vec<u32>> = gens.iter().map(ChainMap::flatten).collect();
    let a = Mat::from_columns(field, total, &cols);
    let b = Mat::from_columns(field, total, &[f.flatten()]);
    let sol = solve_linear(&a, &b).expect("shapes agree")?;
    let mut h: Vec<Mat> = (0..SLOTS).map(|s| Mat::zeros(field, y.dim_at(degree(s) + 1), x.dims[s])).collect();
    let mut k = 0;
    for s in 0..SLOTS - 1 {
        for a in 0..y.dims[s + 1] {
            for b in 0..x.dims[s] {
                h[s].set(a, b, sol.get(k, 0));
                k += 1;
            }
        }
    }
    Some(h)
}

/// `x ↪ C(x)` with `C(x)_i = x_i ⊕ x_{i-1}`, differential `(a, b) ↦ (b, 0)`
/// and embedding `(id, d)`. `C(x)` is a sum of disks.
pub fn disk_embedding(x: &Arc<FComplex>) -> Result<ChainMap> {
    let field = x.field;
    if x.dims[SLOTS - 1] > 0 {
        return Err(window_error());
    }
    let dims: Vec<usize> = (0..SLOTS).map(|s| x.dims[s] + if s > 0 { x.dims[s - 1] } else { 0 }).collect();
    let mut diffs = Vec::with_capacity(SLOTS);
    for s in 0..SLOTS {
        let rows = if s == 0 { 0 } else { dims[s - 1] };
        let mut m = Mat::zeros(field, rows, dims[s]);
        if s > 0 {
            // b ∈ x_{s-1} (second block of C_s) goes to the first block of C_{s-1}
            let n = x.dims[s - 1];
            m.set_block(0, x.dims[s], &Mat::identity(field, n));
        }
        diffs.push(m);
    }
    let c = Arc::new(FComplex { field, dims, diffs });
    let comps = (0..SLOTS)
        .map(|s| {
            let top = Mat::identity(field, x.dims[s]);
            if s == 0 {
                top
            } else {
                top.vstack(&x.diffs[s])
            }
        })
        .collect();
    Ok(ChainMap::new_unchecked(x.clone(), c, comps))
}

/// `P(x) ↠ x` with `P(x)_i = x_i ⊕ x_{i+1}`, differential `(a, b) ↦ (0, a)`
/// and projection `(a, b) ↦ a + d b`.
pub fn disk_cover(x: &Arc<FComplex>) -> Result<ChainMap> {
    let field = x.field;
    if x.dims[0] > 0 {
        return Err(window_error());
    }
    let up = |s: usize| if s + 1 < SLOTS { x.dims[s + 1] } else { 0 };
    let dims: Vec<usize> = (0..SLOTS).map(|s| x.dims[s] + up(s)).collect();
    let mut diffs = Vec::with_capacity(SLOTS);
    for s in 0..SLOTS {
        let rows = if s == 0 { 0 } else { dims[s - 1] };
        let mut m = Mat::zeros(field, rows, dims[s]);
        if s > 0 {
            // a ∈ x_s (first block of P_s) goes to the second block of P_{s-1}
            m.set_block(x.dims[s - 1], 0, &Mat::identity(field, x.dims[s]));
        }
        diffs.push(m);
    }
    let p = Arc::new(FComplex { field, dims, diffs });
    let comps = (0..SLOTS)
        .map(|s| {
            let id = Mat::identity(field, x.dims[s]);
            if s + 1 < SLOTS {
                id.hstack(&x.diffs[s + 1])
            } else {
                id
            }
        })
        .collect();
    Ok(ChainMap::new_unchecked(p, x.clone(), comps))
}

/// Good truncation `⋯ → X₁ → ker d₀ → 0` with its inclusion.
pub fn truncation_w(x: &Arc<FComplex>) -> (Arc<FComplex>, ChainMap) {
    let field = x.field;
    let zero_slot = slot(0).unwrap();
    let ker = kernel_basis(&x.diffs[zero_slot]);
    let mut dims = vec![0; SLOTS];
    for s in zero_slot + 1..SLOTS {
        dims[s] = x.dims[s];
    }
    dims[zero_slot] = ker.cols();
    let mut w = FComplex::from_slots(field, dims, None);
    for s in zero_slot + 2..SLOTS {
        w.diffs[s] = x.diffs[s].clone();
    }
    // d^W_1 = L·d_1 where L reads kernel coordinates off the free rows
    let left = solve_linear(&ker.transpose(), &Mat::identity(field, ker.cols()))
        .expect("shapes")
        .expect("kernel basis has full column rank")
        .transpose();
    w.diffs[zero_slot + 1] = left.dot(&x.diffs[zero_slot + 1]);
    let w = Arc::new(w);
    let comps = (0..SLOTS)
        .map(|s| {
            if s < zero_slot {
                Mat::zeros(field, x.dims[s], 0)
            } else if s == zero_slot {
                ker.clone()
            } else {
                Mat::identity(field, x.dims[s])
            }
        })
        .collect();
    let incl = ChainMap::new_unchecked(w.clone(), x.clone(), comps);
    debug_assert!(incl.is_chain_map());
    (w, incl)
}

pub fn kernel(f: &ChainMap) -> (Arc<FComplex>, ChainMap) {
    let field = f.src.field;
    let bases: Vec<Mat> = f.comps.iter().map(kernel_basis).collect();
    let dims: Vec<usize> = bases.iter().map(Mat::cols).collect();
    let lefts: Vec<Mat> = bases
        .iter()
        .map(|b| {
            solve_linear(&b.transpose(), &Mat::identity(field, b.cols()))
                .expect("shapes")
                .expect("full column rank")
                .transpose()
        })
        .collect();
    let diffs = (0..SLOTS)
        .map(|s| {
            if s == 0 {
                Mat::zeros(field, 0, dims[0])
            } else {
                lefts[s - 1].dot(&f.src.diffs[s].dot(&bases[s]))
            }
        })
        .collect();
    let k = Arc::new(FComplex { field, dims, diffs });
    let incl = ChainMap::new_unchecked(k.clone(), f.src.clone(), bases);
    debug_assert!(incl.is_chain_map());
    (k, incl)
}

pub fn cokernel(f: &ChainMap) -> (Arc<FComplex>, ChainMap) {
    let field = f.src.field;
    let maps: Vec<(Mat, Mat)> = f.comps.iter().map(cokernel_maps).collect();
    let dims: Vec<usize> = maps.iter().map(|(q, _)| q.rows()).collect();
    let diffs = (0..SLOTS)
        .map(|s| {
            if s == 0 {
                Mat::zeros(field, 0, dims[0])
            } else {
                maps[s - 1].0.dot(&f.dst.diffs[s].dot(&maps[s].1))
            }
        })
        .collect();
    let c = Arc::new(FComplex { field, dims, diffs });
    let proj = ChainMap::new_unchecked(f.dst.clone(), c.clone(), maps.into_iter().map(|(q, _)| q).collect());
    debug_assert!(proj.is_chain_map());
    (c, proj)
}

pub fn direct_sum(field: PrimeField, parts: &[Arc<FComplex>]) -> ComplexSum {
    let dims: Vec<usize> = (0..SLOTS).map(|s| parts.iter().map(|x| x.dims[s]).sum()).collect();
    let diffs = (0..SLOTS)
        .map(|s| {
            let rows = if s == 0 { 0 } else { dims[s - 1] };
            let mut m = Mat::zeros(field, rows, dims[s]);
            let (mut r0, mut c0) = (0, 0);
            for x in parts {
                let d = &x.diffs[s];
                m.set_block(r0, c0, d);
                r0 += d.rows();
                c0 += d.cols();
            }
            m
        })
        .collect();
    let complex = Arc::new(FComplex { field, dims: dims.clone(), diffs });
    let mut offs = vec![0; SLOTS];
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    for x in parts {
        let inj: Vec<Mat> = (0..SLOTS)
            .map(|s| {
                let mut m = Mat::zeros(field, dims[s], x.dims[s]);
                m.set_block(offs[s], 0, &Mat::identity(field, x.dims[s]));
                m
            })
            .collect();
        for s in 0..SLOTS {
            offs[s] += x.dims[s];
        }
        projections.push(ChainMap::new_unchecked(
            complex.clone(),
            x.clone(),
            inj.iter().map(Mat::transpose).collect(),
        ));
        injections.push(ChainMap::new_unchecked(x.clone(), complex.clone(), inj));
    }
    ComplexSum { complex, injections, projections }
}

/// Shift by `n` (`X[n]_i = X_{i-n}`) with differential sign `(-1)^n`.
pub fn shift(x: &FComplex, n: i32) -> Result<FComplex> {
    let field = x.field;
    if let Some((lo, hi)) = x.support() {
        if slot(lo + n).is_none() || slot(hi + n).is_none() {
            return Err(window_error());
        }
    }
    let dims: Vec<usize> = (0..SLOTS).map(|s| x.dim_at(degree(s) - n)).collect();
    let diffs = (0..SLOTS)
        .map(|s| {
            if s == 0 {
                return Mat::zeros(field, 0, dims[0]);
            }
            let d = x.d(degree(s) - n);
            if n % 2 == 0 {
                d
            } else {
                d.neg()
            }
        })
        .collect();
    Ok(FComplex { field, dims, diffs })
}

/// Seeded random complex supported in `[lo, hi]` with component dims at most
/// `max_dim`. Differentials are drawn degree by degree from maps that vanish
/// on the image of the one above, so `d² = 0` by construction.
pub fn random_complex(field: PrimeField, lo: i32, hi: i32, max_dim: usize, rng: &mut SplitMix64) -> Result<FComplex> {
    if slot(lo).is_none() || slot(hi).is_none() || lo > hi {
        return Err(window_error());
    }
    let p = field.p();
    let dims: Vec<usize> = (lo..=hi).map(|_| rng.gen_range(0..=max_dim)).collect();
    let len = dims.len();
    let mut diffs = vec![Mat::zeros(field, 0, 0); len];
    diffs[0] = Mat::zeros(field, 0, dims[0]);
    // from the top degree down
    let mut above: Option<Mat> = None;
    for i in (1..len).rev() {
        let (q, _) = match &above {
            Some(d) => cokernel_maps(d),
            None => (Mat::identity(field, dims[i]), Mat::identity(field, dims[i])),
        };
        let mut r = Mat::zeros(field, dims[i - 1], q.rows());
        for a in 0..r.rows() {
            for b in 0..r.cols() {
                r.set(a, b, rng.gen_range(0..p));
            }
        }
        let d = r.dot(&q);
        above = Some(d.clone());
        diffs[i] = d;
    }
    complex_from_data(field, lo, &dims, &diffs)
}

/// Seeded random chain map `x → y`: a random combination of a hom basis.
pub fn random_chain_map(x: &Arc<FComplex>, y: &Arc<FComplex>, rng: &mut SplitMix64) -> ChainMap {
    let p = x.field.p();
    let mut f = ChainMap::zero(x, y);
    for b in chain_hom_basis(x, y) {
        let c = rng.gen_range(0..p);
        if c != 0 {
            f.comps = f.comps.iter().zip(&b.comps).map(|(a, m)| a.add(&m.scale(c))).collect();
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn complex_from_data_examples() {
        let k = f2();
        assert!(sphere(k, 0).is_ok());
        let d0 = disk(k, 0).unwrap();
        assert_eq!((d0.dim_at(0), d0.dim_at(-1)), (1, 1));
        let bad = complex_from_data(
            k,
            -1,
            &[1, 1, 1],
            &[Mat::zeros(k, 0, 1), Mat::identity(k, 1), Mat::identity(k, 1)],
        );
        assert!(matches!(bad, Err(Error::SquareNonzero { degree: 1 })));
        assert!(matches!(sphere(k, 9), Err(Error::WindowExceeded { .. })));
    }

    #[test]
    fn homology_examples() {
        let k = f2();
        let s0 = sphere(k, 0).unwrap();
        assert_eq!(homology_at(&s0, 0), 1);
        assert_eq!(homology_dims(&s0).iter().map(|h| h.1).sum::<usize>(), 1);
        let d0 = disk(k, 0).unwrap();
        assert!(homology_dims(&d0).iter().all(|h| h.1 == 0));
        let sum = direct_sum(k, &[Arc::new(s0), Arc::new(d0)]);
        let h = homology_dims(&sum.complex);
        assert_eq!(h.iter().map(|h| h.1).sum::<usize>(), 1);
        assert_eq!(homology_at(&sum.complex, 0), 1);
    }

    #[test]
    fn disk_embedding_examples() {
        let k = f2();
        let s0 = Arc::new(sphere(k, 0).unwrap());
        let e = disk_embedding(&s0).unwrap();
        assert!(e.is_chain_map());
        assert_eq!((e.dst.dim_at(1), e.dst.dim_at(0)), (1, 1));
        assert_eq!(e.dst.support(), Some((0, 1)));

        let mut rng = SplitMix64::seed_from_u64(11);
        for _ in 0..10 {
            let x = Arc::new(random_complex(PrimeField::new(3).unwrap(), -3, 3, 3, &mut rng).unwrap());
            let e = disk_embedding(&x).unwrap();
            assert!(e.is_chain_map());
            assert!(e.comps.iter().all(|c| c.rank() == c.cols()));
            assert!(nullhomotopy_solve(&ChainMap::identity(&e.dst)).is_some());
            let p = disk_cover(&x).unwrap();
            assert!(p.is_chain_map() && p.is_degreewise_surjective());
            assert!(nullhomotopy_solve(&ChainMap::identity(&p.src)).is_some());
        }
    }

    #[test]
    fn truncation_examples() {
        let k = f2();
        let s0 = Arc::new(sphere(k, 0).unwrap());
        let sm1 = Arc::new(sphere(k, -1).unwrap());
        let x = direct_sum(k, &[s0.clone(), sm1]).complex;
        let (w, incl) = truncation_w(&x);
        assert_eq!(w.support(), Some((0, 0)));
        assert_eq!(w.dim_at(0), 1);
        let (kw, _) = kernel(&incl);
        assert_eq!(kw.total_dim(), 0);

        let (w, _) = truncation_w(&Arc::new(disk(k, 0).unwrap()));
        assert_eq!(w.total_dim(), 0);

        let d2 = Arc::new(disk(k, 2).unwrap());
        let (w, incl) = truncation_w(&d2);
        assert_eq!(*w, *d2);
        assert!(incl.comps.iter().enumerate().all(|(s, c)| *c == Mat::identity(k, d2.slot_dims()[s])));
    }

    #[test]
    fn hom_and_nullhomotopy_examples() {
        let k = f2();
        let s0 = Arc::new(sphere(k, 0).unwrap());
        assert_eq!(chain_hom_basis(&s0, &s0).len(), 1);
        let d0 = Arc::new(disk(k, 0).unwrap());
        assert!(nullhomotopy_solve(&ChainMap::identity(&d0)).is_some());
        assert!(nullhomotopy_solve(&ChainMap::identity(&s0)).is_none());
        let h = nullhomotopy_solve(&ChainMap::zero(&s0, &d0)).unwrap();
        assert_eq!(h.len(), SLOTS);
    }

    #[test]
    fn kernel_cokernel_and_shift() {
        let k = PrimeField::new(3).unwrap();
        let mut rng = SplitMix64::seed_from_u64(5);
        for _ in 0..10 {
            let x = Arc::new(random_complex(k, -2, 2, 3, &mut rng).unwrap());
            let y = Arc::new(random_complex(k, -2, 2, 3, &mut rng).unwrap());
            let f = random_chain_map(&x, &y, &mut rng);
            assert!(f.is_chain_map());
            let (_, i) = kernel(&f);
            assert!(f.after(&i).is_zero());
            let (_, q) = cokernel(&f);
            assert!(q.after(&f).is_zero());
            let sx = shift(&x, 1).unwrap();
            for deg in -3..=3 {
                assert_eq!(homology_at(&sx, deg + 1), homology_at(&x, deg));
            }
        }
        let top = sphere(k, MAX_DEGREE).unwrap();
        assert!(shift(&top, 1).is_err());
        assert!(disk_embedding(&Arc::new(top)).is_err());
    }
}
