//! Graded bundles, cochains, `End`/`Hom`-valued tensors and the signed
//! operations between them.
//!
//! Conventions, fixed once for the whole crate:
//!
//! - a cochain of bidegree `(k, l)` assigns to each `k`-string a vector in the
//!   degree-`l` fiber over `t(g_1)`; its total degree is `k + l`;
//! - a tensor `T` of bidegree `(k, l)` assigns to each `k`-string a degree-`l`
//!   graded map from the fiber over `s(g_k)` to the fiber over `t(g_1)`;
//! - products split a string into a prefix and a suffix; the empty prefix
//!   sits at the moment object, the empty suffix at the source object;
//! - `(T ⋆ T')(γ) = (-1)^{k(k'+l')} T(prefix) ∘ T'(suffix)` and the same
//!   formula lets a tensor act on a cochain or pairs scalar cochains;
//! - `dhat0` is the inner-face alternating sum with the global `(-1)^{k+l}`
//!   prefactor; on cochains the structure operator additionally needs the
//!   drop-last-arrow boundary term, here `dhat0_full`.

use std::collections::BTreeMap;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GString, ObjId};
use crate::linalg::Matrix;
use crate::scalar::{sign, Scalar};

/// A bounded graded vector bundle over the objects of a groupoid: a fiber
/// dimension for every object and degree inside the amplitude window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBundle {
    a: i64,
    b: i64,
    dims: Vec<Vec<usize>>, // dims[object][(l - a) as usize]
}

impl GradedBundle {
    pub fn new(a: i64, b: i64, dims: Vec<Vec<usize>>) -> Self {
        assert!(a <= b, "amplitude must satisfy a <= b");
        for d in &dims {
            assert_eq!(d.len(), (b - a + 1) as usize, "dims row length must match amplitude");
        }
        GradedBundle { a, b, dims }
    }

    /// Trivial line bundle concentrated in one degree.
    pub fn line(g: &FiniteGroupoid, degree: i64) -> Self {
        GradedBundle::new(degree, degree, vec![vec![1]; g.n_objects()])
    }

    pub fn amplitude(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    pub fn width(&self) -> usize {
        (self.b - self.a) as usize
    }

    pub fn n_objects(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, x: ObjId, l: i64) -> usize {
        if l < self.a || l > self.b {
            0
        } else {
            self.dims[x.0][(l - self.a) as usize]
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.a..=self.b
    }

    /// Total rank of the fiber over one object.
    pub fn fiber_rank(&self, x: ObjId) -> usize {
        self.dims[x.0].iter().sum()
    }

    /// The dual bundle: the degree `-l` fiber is the dual of the degree `l` one.
    pub fn dual(&self) -> Self {
        let dims = self
            .dims
            .iter()
            .map(|row| row.iter().rev().copied().collect())
            .collect();
        GradedBundle::new(-self.b, -self.a, dims)
    }
}

/// A graded linear map of fixed degree between graded fibers, stored as one
/// block per source degree.  Absent blocks are zero; shapes are validated
/// against the bundles when tensors are built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap<T> {
    shift: i64,
    blocks: BTreeMap<i64, Matrix<T>>,
}

impl<T: Scalar> GradedMap<T> {
    pub fn zero(shift: i64) -> Self {
        GradedMap { shift, blocks: BTreeMap::new() }
    }

    /// Identity on the fiber of `bundle` over `x`.
    pub fn identity(bundle: &GradedBundle, x: ObjId) -> Self {
        let mut m = GradedMap::zero(0);
        for l in bundle.degrees() {
            let d = bundle.dim(x, l);
            if d > 0 {
                m.blocks.insert(l, Matrix::identity(d));
            }
        }
        m
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn block(&self, l: i64) -> Option<&Matrix<T>> {
        self.blocks.get(&l)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (i64, &Matrix<T>)> {
        self.blocks.iter().map(|(&l, m)| (l, m))
    }

    pub fn set_block(&mut self, l: i64, m: Matrix<T>) {
        if m.is_zero() {
            self.blocks.remove(&l);
        } else {
            self.blocks.insert(l, m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return GradedMap::zero(self.shift);
        }
        GradedMap {
            shift: self.shift,
            blocks: self.blocks.iter().map(|(&l, m)| (l, m.scale(c))).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shift, other.shift, "graded maps of different degree");
        let mut out = self.clone();
        for (&l, m) in &other.blocks {
            let merged = match out.blocks.get(&l) {
                Some(cur) => cur.add(m),
                None => m.clone(),
            };
            out.set_block(l, merged);
        }
        out
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = GradedMap::zero(self.shift + other.shift);
        for (&l, m) in &other.blocks {
            if let Some(n) = self.blocks.get(&(l + other.shift)) {
                out.set_block(l, n.mul(m));
            }
        }
        out
    }

    /// Applies to a vector living in a single degree.
    pub fn apply(&self, l: i64, v: &[T]) -> Option<Vec<T>> {
        self.blocks.get(&l).map(|m| m.mul_vec(v))
    }

    /// Blockwise transpose, reindexed for the dual bundles: the block at
    /// source degree `l` maps `E^l -> F^{l+shift}`, its transpose becomes the
    /// block `(F^*)^{-(l+shift)} -> (E^*)^{-l}` of a degree-`shift` map.
    pub fn dual(&self) -> Self {
        let mut out = GradedMap::zero(self.shift);
        for (&l, m) in &self.blocks {
            out.set_block(-(l + self.shift), m.transpose());
        }
        out
    }
}

/// An `E^l`-valued cochain on `k`-strings.  Missing strings are zero; stored
/// vectors are never all-zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain<T> {
    k: usize,
    l: i64,
    vals: BTreeMap<GString, Vec<T>>,
}

impl<T: Scalar> Cochain<T> {
    pub fn zero(k: usize, l: i64) -> Self {
        Cochain { k, l, vals: BTreeMap::new() }
    }

    /// Basis cochain: `value` on one string, zero elsewhere.
    pub fn delta(k: usize, l: i64, s: GString, value: Vec<T>) -> Self {
        assert_eq!(s.len(), k);
        let mut c = Cochain::zero(k, l);
        c.set(s, value);
        c
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn total_degree(&self) -> i64 {
        self.k as i64 + self.l
    }

    pub fn get(&self, s: &GString) -> Option<&Vec<T>> {
        self.vals.get(s)
    }

    pub fn set(&mut self, s: GString, v: Vec<T>) {
        assert_eq!(s.len(), self.k, "string length must match cocycle degree");
        if v.iter().all(T::is_zero) {
            self.vals.remove(&s);
        } else {
            self.vals.insert(s, v);
        }
    }

    /// `self[s] += c * v`.
    pub fn add_to(&mut self, s: GString, v: &[T], c: &T) {
        if c.is_zero() || v.iter().all(T::is_zero) {
            return;
        }
        let mut cur = self.vals.remove(&s).unwrap_or_else(|| vec![T::zero(); v.len()]);
        assert_eq!(cur.len(), v.len(), "fiber dimension mismatch");
        for (a, b) in cur.iter_mut().zip(v) {
            *a += c.clone() * b.clone();
        }
        self.set(s, cur);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GString, &Vec<T>)> {
        self.vals.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Cochain::zero(self.k, self.l);
        }
        Cochain {
            k: self.k,
            l: self.l,
            vals: self
                .vals
                .iter()
                .map(|(s, v)| (s.clone(), v.iter().map(|x| x.clone() * c.clone()).collect()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.k, self.l), (other.k, other.l), "bidegree mismatch");
        let mut out = self.clone();
        for (s, v) in &other.vals {
            out.add_to(s.clone(), v, &T::one());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }
}

/// Scalar cochains are cochains valued in the trivial line (fiber dimension 1,
/// degree 0).
pub type ScalarCochain<T> = Cochain<T>;

/// An element of `C^k_G(Hom^shift(E, F))`: one graded map per `k`-string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor<T> {
    k: usize,
    shift: i64,
    vals: BTreeMap<GString, GradedMap<T>>,
}

impl<T: Scalar> Tensor<T> {
    pub fn zero(k: usize, shift: i64) -> Self {
        Tensor { k, shift, vals: BTreeMap::new() }
    }

    /// The identity tensor in `C^0_G(End^0)`.
    pub fn identity(g: &FiniteGroupoid, bundle: &GradedBundle) -> Self {
        let mut t = Tensor::zero(0, 0);
        for x in g.objects() {
            t.set(GString::object(x), GradedMap::identity(bundle, x));
        }
        t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Total degree as an operator: `k + shift`.
    pub fn total_degree(&self) -> i64 {
        self.k as i64 + self.shift
    }

    pub fn get(&self, s: &GString) -> Option<&GradedMap<T>> {
        self.vals.get(s)
    }

    pub fn set(&mut self, s: GString, m: GradedMap<T>) {
        assert_eq!(s.len(), self.k, "string length must match cocycle degree");
        assert_eq!(m.shift(), self.shift, "graded map degree must match tensor shift");
        if m.is_zero() {
            self.vals.remove(&s);
        } else {
            self.vals.insert(s, m);
        }
    }

    /// `self[s].block(l) += c * m`.
    pub fn add_block(&mut self, s: GString, l: i64, m: &Matrix<T>, c: &T) {
        if c.is_zero() || m.is_zero() {
            return;
        }
        let mut cur = self.vals.remove(&s).unwrap_or_else(|| GradedMap::zero(self.shift));
        let merged = match cur.block(l) {
            Some(existing) => existing.add(&m.scale(c)),
            None => m.scale(c),
        };
        cur.set_block(l, merged);
        self.set(s, cur);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GString, &GradedMap<T>)> {
        self.vals.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Tensor::zero(self.k, self.shift);
        }
        Tensor {
            k: self.k,
            shift: self.shift,
            vals: self.vals.iter().map(|(s, m)| (s.clone(), m.scale(c))).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.k, self.shift), (other.k, other.shift), "bidegree mismatch");
        let mut out = self.clone();
        for (s, m) in &other.vals {
            let merged = match out.vals.get(s) {
                Some(cur) => cur.add(m),
                None => m.clone(),
            };
            out.set(s.clone(), merged);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    /// Checks every block against the source and target bundles.
    pub fn check_shapes(
        &self,
        g: &FiniteGroupoid,
        src: &GradedBundle,
        tgt: &GradedBundle,
    ) -> Result<()> {
        for (s, m) in &self.vals {
            for (l, block) in m.blocks() {
                let want_cols = src.dim(s.source(g), l);
                let want_rows = tgt.dim(s.moment(), l + self.shift);
                if block.rows() != want_rows || block.cols() != want_cols {
                    return Err(Error::DimMismatch {
                        reason: format!(
                            "tensor block at string {} source degree {} has shape {}x{}, expected {}x{}",
                            s.display(g),
                            l,
                            block.rows(),
                            block.cols(),
                            want_rows,
                            want_cols
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// products and face-sum operators
// ---------------------------------------------------------------------------

/// `(f ⋆ h)(γ) = (-1)^{kp} f(γ_{≤k}) h(γ_{>k})` on trivial-coefficient cochains.
pub fn star_scalar<T: Scalar>(
    g: &FiniteGroupoid,
    f: &ScalarCochain<T>,
    h: &ScalarCochain<T>,
) -> ScalarCochain<T> {
    assert_eq!(f.l(), 0, "scalar cochains live in degree 0");
    assert_eq!(h.l(), 0, "scalar cochains live in degree 0");
    let (k, p) = (f.k(), h.k());
    let sgn: T = sign((k * p) as i64);
    let mut out = Cochain::zero(k + p, 0);
    for (pre, a) in f.iter() {
        for (suf, b) in h.iter() {
            if let Some(s) = pre.concat(g, suf) {
                let v = a[0].clone() * b[0].clone() * sgn.clone();
                out.add_to(s, &[v], &T::one());
            }
        }
    }
    out
}

/// Right module structure: `(η ⋆ f)(γ) = (-1)^{k k'} η(γ_{≤k}) f(γ_{>k})`.
pub fn module_star<T: Scalar>(
    g: &FiniteGroupoid,
    eta: &Cochain<T>,
    f: &ScalarCochain<T>,
) -> Cochain<T> {
    assert_eq!(f.l(), 0, "scalar cochains live in degree 0");
    let (k, kp) = (eta.k(), f.k());
    let sgn: T = sign((k * kp) as i64);
    let mut out = Cochain::zero(k + kp, eta.l());
    for (pre, v) in eta.iter() {
        for (suf, c) in f.iter() {
            if let Some(s) = pre.concat(g, suf) {
                let scale = sgn.clone() * c[0].clone();
                out.add_to(s, v, &scale);
            }
        }
    }
    out
}

/// `(T ⋆ T')(γ) = (-1)^{k(k'+l')} T(γ_{≤k}) ∘ T'(γ_{>k})`.
pub fn end_star<T: Scalar>(g: &FiniteGroupoid, t: &Tensor<T>, u: &Tensor<T>) -> Tensor<T> {
    let sgn: T = sign(t.k() as i64 * (u.k() as i64 + u.shift()));
    let mut out = Tensor::zero(t.k() + u.k(), t.shift() + u.shift());
    for (pre, a) in t.iter() {
        for (suf, b) in u.iter() {
            if let Some(s) = pre.concat(g, suf) {
                let m = a.compose(b).scale(&sgn);
                for (l, block) in m.blocks() {
                    out.add_block(s.clone(), l, block, &T::one());
                }
            }
        }
    }
    out
}

/// A tensor acting on a cochain by the same signed formula.
pub fn module_action<T: Scalar>(
    g: &FiniteGroupoid,
    t: &Tensor<T>,
    eta: &Cochain<T>,
) -> Cochain<T> {
    let sgn: T = sign(t.k() as i64 * (eta.k() as i64 + eta.l()));
    let mut out = Cochain::zero(t.k() + eta.k(), eta.l() + t.shift());
    for (pre, a) in t.iter() {
        for (suf, v) in eta.iter() {
            if let Some(s) = pre.concat(g, suf) {
                if let Some(w) = a.apply(eta.l(), v) {
                    out.add_to(s, &w, &sgn);
                }
            }
        }
    }
    out
}

/// The inner-face alternating sum with the `(-1)^{k+l}` prefactor:
/// `dhat0(η)(g_1,...,g_{k+1}) = (-1)^{k+l} Σ_{i=1}^{k} (-1)^i η(..., g_i g_{i+1}, ...)`.
///
/// Iterates over co-faces of the stored strings: the `(k+1)`-strings with
/// `d_i γ = τ` for an inner `i` are the ones splitting the `i`-th arrow of `τ`.
pub fn dhat0_cochain<T: Scalar>(g: &FiniteGroupoid, eta: &Cochain<T>) -> Cochain<T> {
    let (k, l) = (eta.k(), eta.l());
    let pre: T = sign(k as i64 + l);
    let mut out = Cochain::zero(k + 1, l);
    for (tau, v) in eta.iter() {
        for i in 1..=k {
            let c = pre.clone() * sign::<T>(i as i64);
            for (u, w) in g.factorizations(tau.arrows()[i - 1]) {
                let mut arrows = tau.arrows().to_vec();
                arrows.splice(i - 1..i, [u, w]);
                let gamma = GString::from_arrows(g, arrows).expect("split stays composable");
                out.add_to(gamma, v, &c);
            }
        }
    }
    out
}

/// `dhat0` on a `Hom`-valued tensor: the same inner-face sum.
pub fn dhat0_tensor<T: Scalar>(g: &FiniteGroupoid, t: &Tensor<T>) -> Tensor<T> {
    let (k, l) = (t.k(), t.shift());
    let pre: T = sign(k as i64 + l);
    let mut out = Tensor::zero(k + 1, l);
    for (tau, m) in t.iter() {
        for i in 1..=k {
            let c = pre.clone() * sign::<T>(i as i64);
            for (u, w) in g.factorizations(tau.arrows()[i - 1]) {
                let mut arrows = tau.arrows().to_vec();
                arrows.splice(i - 1..i, [u, w]);
                let gamma = GString::from_arrows(g, arrows).expect("split stays composable");
                for (deg, block) in m.blocks() {
                    out.add_block(gamma.clone(), deg, block, &c);
                }
            }
        }
    }
    out
}

/// The face part of the structure operator on cochains: the inner sum plus
/// the drop-last-arrow boundary term `(-1)^{k+l} (-1)^{k+1} η(g_1,...,g_k)`.
pub fn dhat0_full<T: Scalar>(g: &FiniteGroupoid, eta: &Cochain<T>) -> Cochain<T> {
    let (k, l) = (eta.k(), eta.l());
    let mut out = dhat0_cochain(g, eta);
    let c: T = sign::<T>(k as i64 + l) * sign::<T>(k as i64 + 1);
    for (tau, v) in eta.iter() {
        // co-faces of the drop-last map: append any arrow into the source
        for &w in g.arrows().collect::<Vec<_>>().iter() {
            if g.tgt(w) == tau.source(g) {
                let gamma = tau.concat(g, &GString::from_arrows(g, vec![w]).unwrap()).unwrap();
                out.add_to(gamma, v, &c);
            }
        }
    }
    out
}

/// The trivial-coefficient differential `d` on `C(G)`: the quasi-action
/// operator of the trivial action on the trivial line,
/// `d(f)(g_1,...,g_{k+1}) = (-1)^k { f(d_0) + Σ (-1)^i f(d_i) + (-1)^{k+1} f(d_{k+1}) }`.
pub fn scalar_d<T: Scalar>(g: &FiniteGroupoid, f: &ScalarCochain<T>) -> ScalarCochain<T> {
    assert_eq!(f.l(), 0);
    let k = f.k();
    let mut out = dhat0_full(g, f);
    let c: T = sign(k as i64);
    for s in g.strings(k + 1) {
        if let Some(v) = f.get(&s.face(g, 0).unwrap()) {
            out.add_to(s.clone(), v, &c);
        }
    }
    out
}

/// Merges bidegree pieces with matching `(k, l)` and drops zeros; output is
/// sorted by bidegree so piece lists compare canonically.
pub fn merge_pieces<T: Scalar>(pieces: Vec<Cochain<T>>) -> Vec<Cochain<T>> {
    let mut merged: Vec<Cochain<T>> = Vec::new();
    for p in pieces {
        match merged.iter_mut().find(|m| m.k() == p.k() && m.l() == p.l()) {
            Some(m) => *m = m.add(&p),
            None => merged.push(p),
        }
    }
    merged.retain(|c| !c.is_zero());
    merged.sort_by_key(|c| (c.k(), c.l()));
    merged
}

/// Extracts the tensor components of a `C(G)`-linear operator (given as a
/// function on cochains returning bidegree pieces) of total degree `degree`
/// from source bundle `src` to target bundle `tgt`.
///
/// The operator is probed on delta sections: for `α` supported at `x` in
/// degree `l`, the cocycle-degree-`k` piece of the image is
/// `(L_{T_k} α)(γ) = (-1)^{k l} T_k(γ)(α(s(γ)))`, which determines the blocks.
/// When `subtract_dhat0` is set, `dhat0_full(α)` is removed from the image
/// first (for derivation-type operators such as structure operators).
pub fn tensors_from_operator<T: Scalar>(
    g: &FiniteGroupoid,
    src: &GradedBundle,
    tgt: &GradedBundle,
    degree: i64,
    max_k: usize,
    subtract_dhat0: bool,
    op: &dyn Fn(&Cochain<T>) -> Vec<Cochain<T>>,
) -> Vec<Tensor<T>> {
    let mut out: Vec<Tensor<T>> = (0..=max_k).map(|k| Tensor::zero(k, degree - k as i64)).collect();
    for x in g.objects() {
        for l in src.degrees() {
            let d = src.dim(x, l);
            for j in 0..d {
                let mut v = vec![T::zero(); d];
                v[j] = T::one();
                let alpha = Cochain::delta(0, l, GString::object(x), v);
                let mut pieces = op(&alpha);
                if subtract_dhat0 {
                    pieces.push(dhat0_full(g, &alpha).scale(&-T::one()));
                }
                for piece in merge_pieces(pieces) {
                    if piece.is_zero() {
                        continue;
                    }
                    let k = piece.k();
                    assert!(k <= max_k, "operator has components beyond k = {max_k}");
                    assert_eq!(piece.l(), l + degree - k as i64, "unexpected bidegree");
                    let sgn: T = sign(k as i64 * l);
                    for (gamma, w) in piece.iter() {
                        assert_eq!(gamma.source(g), x, "operator is not C(G)-linear");
                        let rows = tgt.dim(gamma.moment(), l + degree - k as i64);
                        let mut col = Matrix::zero(rows, src.dim(x, l));
                        for (i, val) in w.iter().enumerate() {
                            col.set(i, j, sgn.clone() * val.clone());
                        }
                        out[k].add_block(gamma.clone(), l, &col, &T::one());
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// basis layouts
// ---------------------------------------------------------------------------

/// Coordinates for one bidegree component `C^k(G; E^l)`: strings in
/// enumeration order, fiber coordinates within each string.
#[derive(Clone, Debug)]
pub struct BidegreeLayout {
    pub k: usize,
    pub l: i64,
    pub strings: Vec<GString>,
    offsets: Vec<usize>,
    fiber_dims: Vec<usize>,
    index: HashMap<GString, usize>,
    pub dim: usize,
}

impl BidegreeLayout {
    pub fn new(g: &FiniteGroupoid, bundle: &GradedBundle, k: usize, l: i64) -> Self {
        let strings = g.strings(k);
        let mut offsets = Vec::with_capacity(strings.len());
        let mut fiber_dims = Vec::with_capacity(strings.len());
        let mut dim = 0;
        for s in &strings {
            offsets.push(dim);
            let d = bundle.dim(s.moment(), l);
            fiber_dims.push(d);
            dim += d;
        }
        let index = strings.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        BidegreeLayout { k, l, strings, offsets, fiber_dims, index, dim }
    }

    pub fn position(&self, s: &GString, fiber: usize) -> Option<usize> {
        let i = *self.index.get(s)?;
        debug_assert!(fiber < self.fiber_dims[i]);
        Some(self.offsets[i] + fiber)
    }

    pub fn fiber_dim(&self, i: usize) -> usize {
        self.fiber_dims[i]
    }

    /// Writes a cochain into a coordinate vector.
    pub fn to_vec<T: Scalar>(&self, c: &Cochain<T>) -> Vec<T> {
        assert_eq!((c.k(), c.l()), (self.k, self.l), "bidegree mismatch");
        let mut v = vec![T::zero(); self.dim];
        for (s, vals) in c.iter() {
            let i = self.index[s];
            for (j, x) in vals.iter().enumerate() {
                v[self.offsets[i] + j] = x.clone();
            }
        }
        v
    }

    /// Reads a coordinate vector back into a cochain.
    pub fn to_cochain<T: Scalar>(&self, v: &[T]) -> Cochain<T> {
        assert_eq!(v.len(), self.dim);
        let mut c = Cochain::zero(self.k, self.l);
        for (i, s) in self.strings.iter().enumerate() {
            let d = self.fiber_dims[i];
            if d == 0 {
                continue;
            }
            let vals = v[self.offsets[i]..self.offsets[i] + d].to_vec();
            c.set(s.clone(), vals);
        }
        c
    }

    /// Basis cochains in coordinate order.
    pub fn basis<T: Scalar>(&self) -> Vec<Cochain<T>> {
        let mut out = Vec::with_capacity(self.dim);
        for (i, s) in self.strings.iter().enumerate() {
            for j in 0..self.fiber_dims[i] {
                let mut v = vec![T::zero(); self.fiber_dims[i]];
                v[j] = T::one();
                out.push(Cochain::delta(self.k, self.l, s.clone(), v));
            }
        }
        out
    }
}

/// Coordinates for a total-degree component `C(G; E)^n = ⊕_{k+l=n} C^k(G; E^l)`,
/// components ordered by increasing cocycle degree.
#[derive(Clone, Debug)]
pub struct TotalLayout {
    pub n: i64,
    pub comps: Vec<BidegreeLayout>,
    offsets: Vec<usize>,
    pub dim: usize,
}

impl TotalLayout {
    pub fn new(g: &FiniteGroupoid, bundle: &GradedBundle, n: i64) -> Self {
        let (a, b) = bundle.amplitude();
        let mut comps = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0;
        let k_min = (n - b).max(0);
        let k_max = n - a;
        let mut k = k_min;
        while k <= k_max {
            let layout = BidegreeLayout::new(g, bundle, k as usize, n - k);
            offsets.push(dim);
            dim += layout.dim;
            comps.push(layout);
            k += 1;
        }
        TotalLayout { n, comps, offsets, dim }
    }

    pub fn component(&self, k: usize) -> Option<(&BidegreeLayout, usize)> {
        self.comps
            .iter()
            .position(|c| c.k == k)
            .map(|i| (&self.comps[i], self.offsets[i]))
    }

    /// Embeds a single-bidegree cochain into total-degree coordinates.
    pub fn to_vec<T: Scalar>(&self, c: &Cochain<T>) -> Vec<T> {
        self.pack(std::slice::from_ref(c))
    }

    /// Splits total-degree coordinates into bidegree cochains.
    pub fn to_cochains<T: Scalar>(&self, v: &[T]) -> Vec<Cochain<T>> {
        assert_eq!(v.len(), self.dim);
        self.comps
            .iter()
            .zip(&self.offsets)
            .map(|(layout, &off)| layout.to_cochain(&v[off..off + layout.dim]))
            .collect()
    }

    /// Sum of several bidegree pieces as one coordinate vector.
    pub fn pack<T: Scalar>(&self, pieces: &[Cochain<T>]) -> Vec<T> {
        let mut v = vec![T::zero(); self.dim];
        for c in pieces {
            if c.is_zero() {
                continue;
            }
            assert_eq!(c.total_degree(), self.n, "total degree mismatch");
            match self.component(c.k()) {
                Some((layout, off)) => {
                    for (x, val) in layout.to_vec(c).into_iter().enumerate() {
                        if !val.is_zero() {
                            v[off + x] = v[off + x].clone() + val;
                        }
                    }
                }
                None => panic!("nonzero cochain outside the layout (k = {})", c.k()),
            }
        }
        v
    }

    /// First coordinate of the sub-block with cocycle degree >= p: together
    /// with `dim` this describes the filtration subspace `L^p`.
    pub fn filtration_offset(&self, p: i64) -> usize {
        for (layout, &off) in self.comps.iter().zip(&self.offsets) {
            if (layout.k as i64) >= p {
                return off;
            }
        }
        self.dim
    }
}
