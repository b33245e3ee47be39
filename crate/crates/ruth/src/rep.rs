//! Representations up to homotopy: structure tensors, the assembled structure
//! operator, verification, cohomology, duals, normalized subspaces and the
//! quasi-action/operator correspondence.
//!
//! A representation is a bounded graded bundle `E` with tensors
//! `R_k ∈ C^k(G; End^{1-k}(E))` for `k = 0, ..., width+1` (beyond that the
//! target `Hom` bundle is zero, so nonzero data is rejected).  The structure
//! operator on cochains is
//!
//! `D(η) = Σ_k R_k ⋆ η + dhat0_full(η)`
//!
//! and the structure equations say, for each `k` and each `k`-string,
//!
//! `Σ_{j=1}^{k-1} (-1)^j R_{k-1}(..., g_j g_{j+1}, ...)
//!     = Σ_{j=0}^{k} (-1)^j R_j(g_1,...,g_j) ∘ R_{k-j}(g_{j+1},...,g_k)`.
//!
//! `verify_structure` evaluates these literally, string by string, and
//! separately checks `D^2 = 0` on assembled matrices; the two verdicts must
//! agree, which is asserted on every call.

use std::sync::Arc;

use crate::cochain::{
    dhat0_full, module_action, module_star, scalar_d, BidegreeLayout, Cochain, GradedBundle,
    GradedMap, ScalarCochain, Tensor, TotalLayout,
};
pub use crate::cochain::merge_pieces;
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GString, ObjId};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{sign, Scalar};

/// How unital a representation is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unitality {
    /// `R_1` is not the identity on some unit.
    None,
    /// `R_1(1_x) = Id` everywhere but some higher `R_k` survives a unit entry.
    WeaklyUnital,
    /// `R_1(1_x) = Id` and `R_k` vanishes on unit-containing strings, `k >= 2`.
    Unital,
}

/// A representation up to homotopy of a finite groupoid.
#[derive(Clone, Debug)]
pub struct Rep<T> {
    groupoid: Arc<FiniteGroupoid>,
    bundle: GradedBundle,
    /// `tensors[k] = R_k`, for `k = 0 ..= width + 1`.
    tensors: Vec<Tensor<T>>,
}

impl<T: Scalar> Rep<T> {
    /// Builds a representation, validating shapes and the truncation bound.
    ///
    /// Tensors may be passed for any `k`; entries with `k > width + 1` are
    /// rejected since `End^{1-k}(E)` has no room for them.
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        bundle: GradedBundle,
        tensors: Vec<Tensor<T>>,
    ) -> Result<Self> {
        assert_eq!(bundle.n_objects(), groupoid.n_objects(), "bundle base mismatch");
        let max_k = bundle.width() + 1;
        let mut stored: Vec<Tensor<T>> =
            (0..=max_k).map(|k| Tensor::zero(k, 1 - k as i64)).collect();
        for t in tensors {
            if t.is_zero() {
                continue;
            }
            if t.k() > max_k {
                return Err(Error::TruncationViolation { k: t.k(), max: max_k });
            }
            if t.shift() != 1 - t.k() as i64 {
                return Err(Error::DimMismatch {
                    reason: format!("R_{} must have degree {}", t.k(), 1 - t.k() as i64),
                });
            }
            t.check_shapes(&groupoid, &bundle, &bundle)?;
            stored[t.k()] = stored[t.k()].add(&t);
        }
        Ok(Rep { groupoid, bundle, tensors: stored })
    }

    /// The trivial line representation in degree 0.
    pub fn trivial(groupoid: Arc<FiniteGroupoid>) -> Self {
        Rep::trivial_line(groupoid, 0)
    }

    /// Trivial line representation concentrated in a chosen degree.
    pub fn trivial_line(groupoid: Arc<FiniteGroupoid>, degree: i64) -> Self {
        let bundle = GradedBundle::line(&groupoid, degree);
        let mut lambda = Tensor::zero(1, 0);
        for a in groupoid.arrows() {
            let mut m = GradedMap::zero(0);
            m.set_block(degree, Matrix::identity(1));
            lambda.set(GString::from_arrows(&groupoid, vec![a]).unwrap(), m);
        }
        Rep::new(groupoid, bundle, vec![lambda]).expect("trivial representation is valid")
    }

    /// Strict representation: a fiberwise differential and a chain action.
    pub fn strict(
        groupoid: Arc<FiniteGroupoid>,
        bundle: GradedBundle,
        partial: Tensor<T>,
        lambda: Tensor<T>,
    ) -> Result<Self> {
        Rep::new(groupoid, bundle, vec![partial, lambda])
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn bundle(&self) -> &GradedBundle {
        &self.bundle
    }

    /// `R_k`; zero for `k` beyond the stored range.
    pub fn r(&self, k: usize) -> Tensor<T> {
        self.tensors
            .get(k)
            .cloned()
            .unwrap_or_else(|| Tensor::zero(k, 1 - k as i64))
    }

    pub fn tensors(&self) -> &[Tensor<T>] {
        &self.tensors
    }

    pub fn max_k(&self) -> usize {
        self.bundle.width() + 1
    }

    /// Is every `R_k`, `k >= 2`, zero?
    pub fn is_strict(&self) -> bool {
        self.tensors.iter().skip(2).all(Tensor::is_zero)
    }

    pub fn require_strict(&self) -> Result<()> {
        for (k, t) in self.tensors.iter().enumerate().skip(2) {
            if !t.is_zero() {
                return Err(Error::NotStrict { k });
            }
        }
        Ok(())
    }

    /// Coordinates of the total-degree-`n` cochain component.
    pub fn layout(&self, n: i64) -> TotalLayout {
        TotalLayout::new(&self.groupoid, &self.bundle, n)
    }

    /// Applies the structure operator to one bidegree piece, returning the
    /// bidegree pieces of the image.
    pub fn apply_d(&self, eta: &Cochain<T>) -> Vec<Cochain<T>> {
        let mut out = Vec::new();
        for t in &self.tensors {
            if !t.is_zero() {
                let part = module_action(&self.groupoid, t, eta);
                if !part.is_zero() {
                    out.push(part);
                }
            }
        }
        let face = dhat0_full(&self.groupoid, eta);
        if !face.is_zero() {
            out.push(face);
        }
        merge_pieces(out)
    }

    /// Matrix of `D` from total degree `n` to `n + 1`.
    pub fn structure_matrix(&self, n: i64) -> Matrix<T> {
        let from = self.layout(n);
        let to = self.layout(n + 1);
        let mut m = Matrix::zero(to.dim, from.dim);
        let mut col = 0;
        for comp in &from.comps {
            for eta in comp.basis::<T>() {
                let image = self.apply_d(&eta);
                let v = to.pack(&image);
                for (row, x) in v.into_iter().enumerate() {
                    if !x.is_zero() {
                        m.set(row, col, x);
                    }
                }
                col += 1;
            }
        }
        debug_assert_eq!(col, from.dim);
        m
    }

    /// Literal residual of the structure equation at index `k`: the tensor
    /// `RHS - LHS` of bidegree `(k, 2-k)`, zero exactly when the equation
    /// holds on every `k`-string.
    pub fn structure_residual(&self, k: usize) -> Tensor<T> {
        let g = &*self.groupoid;
        let mut out = Tensor::zero(k, 2 - k as i64);
        for s in g.strings(k) {
            let mut acc = GradedMap::zero(2 - k as i64);
            // RHS: signed compositions over all splittings
            for j in 0..=k {
                let pre = s.prefix(g, j);
                let suf = s.suffix_from(g, j);
                let (rj, rkj) = (self.r(j), self.r(k - j));
                if let (Some(a), Some(b)) = (rj.get(&pre), rkj.get(&suf)) {
                    acc = acc.add(&a.compose(b).scale(&sign::<T>(j as i64)));
                }
            }
            // LHS: inner faces of R_{k-1}
            if k >= 1 {
                let rk1 = self.r(k - 1);
                for j in 1..k {
                    if let Some(m) = rk1.get(&s.face(g, j).unwrap()) {
                        acc = acc.add(&m.scale(&-sign::<T>(j as i64)));
                    }
                }
            }
            if !acc.is_zero() {
                out.set(s, acc);
            }
        }
        out
    }

    /// Evaluates all structure equations and, independently, `D^2 = 0` on
    /// assembled matrices; asserts the two verdicts agree.
    pub fn verify_structure(&self) -> StructureReport {
        let mut violations = Vec::new();
        for k in 0..=self.max_k() + 1 {
            let residual = self.structure_residual(k);
            for (s, m) in residual.iter() {
                for (l, block) in m.blocks() {
                    for i in 0..block.rows() {
                        for j in 0..block.cols() {
                            let v = block.get(i, j);
                            if !v.is_zero() {
                                violations.push(StructureViolation {
                                    k,
                                    string: s.display(&self.groupoid),
                                    source_degree: l,
                                    entry: (i, j),
                                    residual: v.to_string(),
                                });
                            }
                        }
                    }
                }
            }
        }
        // independent route: D^2 on sections detects every equation, so the
        // amplitude window suffices
        let (a, b) = self.bundle.amplitude();
        let mut square_zero = true;
        'outer: for n in a..=b {
            let d_n = self.structure_matrix(n);
            let d_n1 = self.structure_matrix(n + 1);
            if !d_n1.mul(&d_n).is_zero() {
                square_zero = false;
                break 'outer;
            }
        }
        assert_eq!(
            violations.is_empty(),
            square_zero,
            "structure-equation residuals and D^2 = 0 must agree"
        );
        StructureReport { violations, square_zero }
    }

    /// Cohomology dimensions `dim H^n` for `n` in the inclusive window.
    pub fn cohomology(&self, window: (i64, i64)) -> Result<Vec<(i64, usize)>> {
        let report = self.verify_structure();
        if !report.is_valid() {
            return Err(Error::StructureEquationsViolated { k: report.violations[0].k });
        }
        Ok(self.cohomology_unchecked(window))
    }

    /// Cohomology dims without re-running verification.
    pub fn cohomology_unchecked(&self, window: (i64, i64)) -> Vec<(i64, usize)> {
        let (n0, n1) = window;
        let mut out = Vec::new();
        let mut prev_rank: Option<usize> = None;
        for n in n0..=n1 {
            let below = match prev_rank {
                Some(r) => r,
                None => self.structure_matrix(n - 1).rank(),
            };
            let d_n = self.structure_matrix(n);
            let rank = d_n.rank();
            let kernel = self.layout(n).dim - rank;
            out.push((n, kernel - below));
            prev_rank = Some(rank);
        }
        out
    }

    /// The dual representation:
    /// `R^*_k(g_1,...,g_k) = (-1)^{k+1} (R_k(g_k^{-1},...,g_1^{-1}))^*`.
    pub fn dualize(&self) -> Rep<T> {
        let g = &*self.groupoid;
        let mut tensors = Vec::new();
        for t in &self.tensors {
            let k = t.k();
            let mut dual = Tensor::zero(k, t.shift());
            let sgn: T = sign(k as i64 + 1);
            for (s, m) in t.iter() {
                let arrows: Vec<_> = s.arrows().iter().rev().map(|&a| g.inv(a)).collect();
                let rev = if arrows.is_empty() {
                    GString::object(s.moment())
                } else {
                    GString::from_arrows(g, arrows).unwrap()
                };
                dual.set(rev, m.dual().scale(&sgn));
            }
            tensors.push(dual);
        }
        Rep::new(self.groupoid.clone(), self.bundle.dual(), tensors)
            .expect("dual of a well-shaped representation is well-shaped")
    }

    /// Basis of the normalized subspace `Ĉ^k(G; E^l)` (cochains vanishing on
    /// every degenerate string) in bidegree-layout coordinates.
    pub fn normalized_subspace(&self, k: usize, l: i64) -> Subspace<T> {
        let layout = BidegreeLayout::new(&self.groupoid, &self.bundle, k, l);
        let mut rows = Vec::new();
        for (i, s) in layout.strings.iter().enumerate() {
            if k >= 1 && s.has_unit_entry(&self.groupoid) {
                continue;
            }
            for f in 0..layout.fiber_dim(i) {
                let mut v = vec![T::zero(); layout.dim];
                v[layout.position(s, f).unwrap()] = T::one();
                rows.push(v);
            }
        }
        Subspace::from_rows(layout.dim, rows)
    }

    /// Unitality of the tensor data.
    pub fn unitality(&self) -> Unitality {
        let g = &*self.groupoid;
        let r1 = self.r(1);
        for x in g.objects() {
            let s = GString::from_arrows(g, vec![g.unit(x)]).unwrap();
            let id = GradedMap::identity(&self.bundle, x);
            let got = r1.get(&s).cloned().unwrap_or_else(|| GradedMap::zero(0));
            if got != id {
                return Unitality::None;
            }
        }
        for t in self.tensors.iter().skip(2) {
            for (s, m) in t.iter() {
                if s.has_unit_entry(g) && !m.is_zero() {
                    return Unitality::WeaklyUnital;
                }
            }
        }
        Unitality::Unital
    }

    /// Checks both unitality routes: the tensor conditions and preservation of
    /// the normalized subspace by `D`; asserts the two agree.
    pub fn is_unital(&self) -> bool {
        let by_data = self.unitality() == Unitality::Unital;
        let by_operator = self.preserves_normalized();
        assert_eq!(by_data, by_operator, "unitality test routes disagree");
        by_data
    }

    /// Does `D` map the normalized subspace into itself, in every total degree
    /// of the amplitude-driven window?
    fn preserves_normalized(&self) -> bool {
        let (a, b) = self.bundle.amplitude();
        for n in a..=b + self.max_k() as i64 {
            let from = self.layout(n);
            let to = self.layout(n + 1);
            let d = self.structure_matrix(n);
            let normalized_from = self.normalized_total(&from);
            let normalized_to = self.normalized_total(&to);
            for v in normalized_from.basis_vectors() {
                if !normalized_to.contains(&d.mul_vec(&v)) {
                    return false;
                }
            }
        }
        true
    }

    fn normalized_total(&self, layout: &TotalLayout) -> Subspace<T> {
        let mut rows = Vec::new();
        for comp in &layout.comps {
            let sub = self.normalized_subspace(comp.k, comp.l);
            for v in sub.basis_vectors() {
                let c = comp.to_cochain(&v);
                rows.push(layout.to_vec(&c));
            }
        }
        Subspace::from_rows(layout.dim, rows)
    }

    pub fn require_unital(&self) -> Result<()> {
        match self.unitality() {
            Unitality::Unital => Ok(()),
            Unitality::WeaklyUnital => Err(Error::NotUnital {
                reason: "higher structure tensor survives a unit entry".into(),
            }),
            Unitality::None => Err(Error::NotUnital {
                reason: "R_1 is not the identity on some unit".into(),
            }),
        }
    }

    /// Fiberwise differential of `R_0` at one object.
    pub fn differential_at(&self, x: ObjId) -> GradedMap<T> {
        self.r(0)
            .get(&GString::object(x))
            .cloned()
            .unwrap_or_else(|| GradedMap::zero(1))
    }
}

/// One nonzero entry of a structure-equation residual.
#[derive(Clone, Debug)]
pub struct StructureViolation {
    pub k: usize,
    pub string: String,
    pub source_degree: i64,
    pub entry: (usize, usize),
    pub residual: String,
}

/// Output of [`Rep::verify_structure`].
#[derive(Clone, Debug)]
pub struct StructureReport {
    pub violations: Vec<StructureViolation>,
    pub square_zero: bool,
}

impl StructureReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

// ---------------------------------------------------------------------------
// quasi-actions as operators
// ---------------------------------------------------------------------------

/// The degree-one operator `D̂_λ` attached to a graded quasi-action.
pub struct QuasiActionOperator<T> {
    groupoid: Arc<FiniteGroupoid>,
    lambda: Tensor<T>,
}

impl<T: Scalar> QuasiActionOperator<T> {
    pub fn new(groupoid: Arc<FiniteGroupoid>, lambda: Tensor<T>) -> Self {
        assert_eq!(lambda.k(), 1, "a quasi-action is a bidegree (1,0) tensor");
        assert_eq!(lambda.shift(), 0, "a quasi-action preserves the fiber degree");
        QuasiActionOperator { groupoid, lambda }
    }

    /// `D̂_λ(η) = λ ⋆ η + dhat0_full(η)`.
    pub fn apply(&self, eta: &Cochain<T>) -> Cochain<T> {
        module_action(&self.groupoid, &self.lambda, eta).add(&dhat0_full(&self.groupoid, eta))
    }

    pub fn lambda(&self) -> &Tensor<T> {
        &self.lambda
    }
}

/// Recovers the quasi-action from a degree-one operator satisfying the
/// Leibniz identity: `λ_g(v) = (-1)^l (Dα)(g) + α(t(g))` for the section `α`
/// supported at `s(g)` with value `v`.
///
/// The Leibniz identity `D(η ⋆ f) = D(η) ⋆ f + (-1)^{|η|} η ⋆ d(f)` is checked
/// on a spanning set first.
pub fn operator_to_quasi_action<T: Scalar>(
    groupoid: &Arc<FiniteGroupoid>,
    bundle: &GradedBundle,
    op: &dyn Fn(&Cochain<T>) -> Cochain<T>,
) -> Result<Tensor<T>> {
    let g = &**groupoid;
    for k in 0..=1usize {
        for l in bundle.degrees() {
            let layout = BidegreeLayout::new(g, bundle, k, l);
            for eta in layout.basis::<T>() {
                for kf in 0..=1usize {
                    for s in g.strings(kf) {
                        let f: ScalarCochain<T> = Cochain::delta(kf, 0, s, vec![T::one()]);
                        let lhs = op(&module_star(g, &eta, &f));
                        let rhs = module_star(g, &op(&eta), &f).add(
                            &module_star(g, &eta, &scalar_d(g, &f))
                                .scale(&sign::<T>(eta.total_degree())),
                        );
                        if lhs != rhs {
                            return Err(Error::NotLeibniz);
                        }
                    }
                }
            }
        }
    }
    let mut lambda = Tensor::zero(1, 0);
    for a in g.arrows() {
        let (x, y) = (g.src(a), g.tgt(a));
        let s1 = GString::from_arrows(g, vec![a]).unwrap();
        let mut m = GradedMap::zero(0);
        for l in bundle.degrees() {
            let (dx, dy) = (bundle.dim(x, l), bundle.dim(y, l));
            if dx == 0 || dy == 0 {
                continue;
            }
            let mut block = Matrix::zero(dy, dx);
            for j in 0..dx {
                let mut v = vec![T::zero(); dx];
                v[j] = T::one();
                let alpha = Cochain::delta(0, l, GString::object(x), v.clone());
                let image = op(&alpha);
                let mut column = vec![T::zero(); dy];
                if let Some(w) = image.get(&s1) {
                    for (i, val) in w.iter().enumerate() {
                        column[i] = sign::<T>(l) * val.clone();
                    }
                }
                if y == x {
                    // α(t(g)) = v when the endpoints coincide
                    for (i, val) in v.iter().enumerate() {
                        column[i] = column[i].clone() + val.clone();
                    }
                }
                for (i, val) in column.into_iter().enumerate() {
                    if !val.is_zero() {
                        block.set(i, j, val);
                    }
                }
            }
            m.set_block(l, block);
        }
        lambda.set(s1, m);
    }
    Ok(lambda)
}
