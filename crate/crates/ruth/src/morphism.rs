//! Morphisms of representations up to homotopy, mapping cones and the
//! DG Hom complex.
//!
//! A morphism `Φ: E -> F` is a family `Φ_k ∈ C^k_G(Hom^{-k}(E, F))`; the
//! corresponding operator `Σ_k L_{Φ_k}` is `C(G)`-linear of degree 0 and the
//! morphism equations say it commutes with the structure operators:
//!
//! `Σ_{i+j=k} (-1)^j Φ_j ∘ R_i
//!    = Σ_{i+j=k} R'_j ∘ Φ_i + Σ_{j=1}^{k-1} (-1)^j Φ_{k-1}(..., g_j g_{j+1}, ...)`.
//!
//! `verify` evaluates these literally and cross-checks operator commutation
//! `D_F ∘ Φ = Φ ∘ D_E` on assembled matrices; the verdicts must agree.

use crate::cochain::{
    dhat0_tensor, end_star, module_action, Cochain, GradedBundle, GradedMap, Tensor,
};
use crate::error::{Error, Result};
use crate::groupoid::GString;
use crate::linalg::Matrix;
use crate::rep::{merge_pieces, Rep};
use crate::scalar::{sign, Scalar};

/// A morphism of representations up to homotopy over one groupoid.
#[derive(Clone, Debug)]
pub struct Morphism<T> {
    source: Rep<T>,
    target: Rep<T>,
    /// `tensors[k] = Φ_k`, `k = 0 ..= max(0, b_E - a_F)`.
    tensors: Vec<Tensor<T>>,
}

impl<T: Scalar> Morphism<T> {
    pub fn new(source: Rep<T>, target: Rep<T>, tensors: Vec<Tensor<T>>) -> Result<Self> {
        assert!(
            std::sync::Arc::ptr_eq(source.groupoid(), target.groupoid()),
            "morphisms connect representations of one groupoid"
        );
        let bound = Morphism::<T>::bound_for(&source, &target);
        let mut stored: Vec<Tensor<T>> =
            (0..=bound).map(|k| Tensor::zero(k, -(k as i64))).collect();
        for t in tensors {
            if t.is_zero() {
                continue;
            }
            if t.k() > bound {
                // the grading forces Φ_k = 0 beyond b_E - a_F
                return Err(Error::DimMismatch {
                    reason: format!(
                        "Φ_{} cannot be nonzero: Hom^{}(E,F) vanishes",
                        t.k(),
                        -(t.k() as i64)
                    ),
                });
            }
            if t.shift() != -(t.k() as i64) {
                return Err(Error::DimMismatch {
                    reason: format!("Φ_{} must have degree {}", t.k(), -(t.k() as i64)),
                });
            }
            t.check_shapes(source.groupoid(), source.bundle(), target.bundle())?;
            stored[t.k()] = stored[t.k()].add(&t);
        }
        Ok(Morphism { source, target, tensors: stored })
    }

    fn bound_for(source: &Rep<T>, target: &Rep<T>) -> usize {
        let (_, b_e) = source.bundle().amplitude();
        let (a_f, _) = target.bundle().amplitude();
        (b_e - a_f).max(0) as usize
    }

    pub fn identity(rep: &Rep<T>) -> Self {
        let id = Tensor::identity(rep.groupoid(), rep.bundle());
        Morphism::new(rep.clone(), rep.clone(), vec![id]).expect("identity is well-shaped")
    }

    pub fn zero(source: Rep<T>, target: Rep<T>) -> Self {
        Morphism::new(source, target, Vec::new()).expect("zero is well-shaped")
    }

    pub fn source(&self) -> &Rep<T> {
        &self.source
    }

    pub fn target(&self) -> &Rep<T> {
        &self.target
    }

    pub fn phi(&self, k: usize) -> Tensor<T> {
        self.tensors.get(k).cloned().unwrap_or_else(|| Tensor::zero(k, -(k as i64)))
    }

    pub fn tensors(&self) -> &[Tensor<T>] {
        &self.tensors
    }

    pub fn is_strict(&self) -> bool {
        self.tensors.iter().skip(1).all(Tensor::is_zero)
    }

    /// The operator `Φ(η) = Σ_k Φ_k ⋆ η` on bidegree pieces.
    pub fn apply(&self, eta: &Cochain<T>) -> Vec<Cochain<T>> {
        let g = self.source.groupoid();
        let mut out = Vec::new();
        for t in &self.tensors {
            if !t.is_zero() {
                let part = module_action(g, t, eta);
                if !part.is_zero() {
                    out.push(part);
                }
            }
        }
        merge_pieces(out)
    }

    /// Matrix of the operator from `C(G;E)^n` to `C(G;F)^n`.
    pub fn matrix(&self, n: i64) -> Matrix<T> {
        let from = self.source.layout(n);
        let to = self.target.layout(n);
        let mut m = Matrix::zero(to.dim, from.dim);
        let mut col = 0;
        for comp in &from.comps {
            for eta in comp.basis::<T>() {
                let v = to.pack(&self.apply(&eta));
                for (row, x) in v.into_iter().enumerate() {
                    if !x.is_zero() {
                        m.set(row, col, x);
                    }
                }
                col += 1;
            }
        }
        m
    }

    /// Literal residual of the morphism equation at `k` (LHS minus RHS).
    pub fn residual(&self, k: usize) -> Tensor<T> {
        let g = self.source.groupoid().clone();
        let mut out = Tensor::zero(k, 1 - k as i64);
        for s in g.strings(k) {
            let mut acc = GradedMap::zero(1 - k as i64);
            for j in 0..=k {
                let i = k - j;
                let pre = s.prefix(&g, j);
                let suf = s.suffix_from(&g, j);
                // LHS: (-1)^j Φ_j ∘ R_i
                if let (Some(p), Some(r)) = (self.phi(j).get(&pre), self.source.r(i).get(&suf)) {
                    acc = acc.add(&p.compose(r).scale(&sign::<T>(j as i64)));
                }
                // RHS: R'_j ∘ Φ_i
                if let (Some(r), Some(p)) = (self.target.r(j).get(&pre), self.phi(i).get(&suf)) {
                    acc = acc.add(&r.compose(p).scale(&-T::one()));
                }
            }
            // RHS: inner faces of Φ_{k-1}
            if k >= 1 {
                let prev = self.phi(k - 1);
                for j in 1..k {
                    if let Some(m) = prev.get(&s.face(&g, j).unwrap()) {
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

    /// Evaluates the morphism equations and cross-checks commutation with the
    /// structure operators on assembled matrices; asserts agreement.
    pub fn verify(&self) -> MorphismReport {
        let mut violations = Vec::new();
        let width = self.source.bundle().width().max(self.target.bundle().width());
        let bound = self.tensors.len();
        for k in 0..=bound + width + 2 {
            let residual = self.residual(k);
            for (s, m) in residual.iter() {
                for (l, block) in m.blocks() {
                    for i in 0..block.rows() {
                        for j in 0..block.cols() {
                            let v = block.get(i, j);
                            if !v.is_zero() {
                                violations.push(MorphismViolation {
                                    k,
                                    string: s.display(self.source.groupoid()),
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
        // independent route: commutation on the amplitude window detects every
        // equation (the defect operator is C(G)-linear)
        let (a_e, b_e) = self.source.bundle().amplitude();
        let mut commutes = true;
        'outer: for n in a_e..=b_e {
            let lhs = self.matrix(n + 1).mul(&self.source.structure_matrix(n));
            let rhs = self.target.structure_matrix(n).mul(&self.matrix(n));
            if lhs != rhs {
                commutes = false;
                break 'outer;
            }
        }
        assert_eq!(
            violations.is_empty(),
            commutes,
            "morphism-equation residuals and operator commutation must agree"
        );
        MorphismReport { violations, commutes }
    }

    pub fn require_valid(&self) -> Result<()> {
        let report = self.verify();
        if !report.is_valid() {
            return Err(Error::InvalidMorphism { k: report.violations[0].k });
        }
        Ok(())
    }

    /// Composition `self ∘ other` at the tensor level:
    /// `(Ψ ∘ Φ)_k = Σ_{i+j=k} Ψ_j ⋆ Φ_i`.
    pub fn compose(&self, other: &Morphism<T>) -> Result<Morphism<T>> {
        let g = self.source.groupoid().clone();
        let bound = Morphism::<T>::bound_for(&other.source, &self.target);
        let mut tensors: Vec<Tensor<T>> =
            (0..=bound).map(|k| Tensor::zero(k, -(k as i64))).collect();
        for (j, psi) in self.tensors.iter().enumerate() {
            for (i, phi) in other.tensors.iter().enumerate() {
                if psi.is_zero() || phi.is_zero() {
                    continue;
                }
                let prod = end_star(&g, psi, phi);
                if i + j <= bound {
                    tensors[i + j] = tensors[i + j].add(&prod);
                } else {
                    assert!(prod.is_zero(), "composition escapes the Hom bound");
                }
            }
        }
        Morphism::new(other.source.clone(), self.target.clone(), tensors)
    }

    /// The mapping cone: bundle `C^n = E^n ⊕ F^{n-1}` with structure tensors
    /// `R_k(γ)(e, f) = (R_k(γ) e, Φ_k(γ) e - (-1)^k R'_k(γ) f)`.
    pub fn mapping_cone(&self) -> Result<Rep<T>> {
        self.require_valid()?;
        let g = self.source.groupoid().clone();
        let e = self.source.bundle();
        let f = self.target.bundle();
        let (a_e, b_e) = e.amplitude();
        let (a_f, b_f) = f.amplitude();
        let (a, b) = (a_e.min(a_f + 1), b_e.max(b_f + 1));
        let dims: Vec<Vec<usize>> = g
            .objects()
            .map(|x| (a..=b).map(|n| e.dim(x, n) + f.dim(x, n - 1)).collect())
            .collect();
        let bundle = GradedBundle::new(a, b, dims);

        let max_k = bundle.width() + 1;
        let mut tensors: Vec<Tensor<T>> =
            (0..=max_k).map(|k| Tensor::zero(k, 1 - k as i64)).collect();
        for (k, slot) in tensors.iter_mut().enumerate() {
            let shift = 1 - k as i64;
            let re = self.source.r(k);
            let rf = self.target.r(k);
            let ph = self.phi(k);
            for s in g.strings(k) {
                let (x, y) = (s.source(&g), s.moment());
                let mut gm = GradedMap::zero(shift);
                for n in a..=b {
                    let (src_e, src_f) = (e.dim(x, n), f.dim(x, n - 1));
                    let (tgt_e, tgt_f) = (e.dim(y, n + shift), f.dim(y, n + shift - 1));
                    if src_e + src_f == 0 || tgt_e + tgt_f == 0 {
                        continue;
                    }
                    let mut block = Matrix::zero(tgt_e + tgt_f, src_e + src_f);
                    if let Some(m) = re.get(&s).and_then(|m| m.block(n)) {
                        for i in 0..m.rows() {
                            for jj in 0..m.cols() {
                                block.set(i, jj, m.get(i, jj));
                            }
                        }
                    }
                    if let Some(m) = ph.get(&s).and_then(|m| m.block(n)) {
                        for i in 0..m.rows() {
                            for jj in 0..m.cols() {
                                block.set(tgt_e + i, jj, m.get(i, jj));
                            }
                        }
                    }
                    if let Some(m) = rf.get(&s).and_then(|m| m.block(n - 1)) {
                        let c = -sign::<T>(k as i64);
                        for i in 0..m.rows() {
                            for jj in 0..m.cols() {
                                block.set(tgt_e + i, src_e + jj, c.clone() * m.get(i, jj));
                            }
                        }
                    }
                    if !block.is_zero() {
                        gm.set_block(n, block);
                    }
                }
                if !gm.is_zero() {
                    slot.set(s.clone(), gm);
                }
            }
        }
        Rep::new(g, bundle, tensors)
    }
}

/// One nonzero entry of a morphism-equation residual.
#[derive(Clone, Debug)]
pub struct MorphismViolation {
    pub k: usize,
    pub string: String,
    pub source_degree: i64,
    pub entry: (usize, usize),
    pub residual: String,
}

/// Output of [`Morphism::verify`].
#[derive(Clone, Debug)]
pub struct MorphismReport {
    pub violations: Vec<MorphismViolation>,
    pub commutes: bool,
}

impl MorphismReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

// ---------------------------------------------------------------------------
// the DG Hom complex
// ---------------------------------------------------------------------------

/// The Hom complex `Hom^•(E, F)` with differential
/// `D(Φ) = D_F ∘ Φ - (-1)^{|Φ|} Φ ∘ D_E`, realized on tensor families.
pub struct HomComplex<T> {
    source: Rep<T>,
    target: Rep<T>,
}

/// Coordinates of `Hom^n(E, F)`: for each admissible cocycle degree `k`, each
/// `k`-string, each source degree `l`, a block of matrix entries.
pub struct HomLayout {
    pub n: i64,
    /// (k, string, source degree, rows, cols, offset)
    entries: Vec<(usize, GString, i64, usize, usize, usize)>,
    pub dim: usize,
}

impl<T: Scalar> HomComplex<T> {
    pub fn new(source: Rep<T>, target: Rep<T>) -> Result<Self> {
        source.verify_structure().is_valid().then_some(()).ok_or(
            Error::StructureEquationsViolated { k: 0 },
        )?;
        target
            .verify_structure()
            .is_valid()
            .then_some(())
            .ok_or(Error::StructureEquationsViolated { k: 0 })?;
        Ok(HomComplex { source, target })
    }

    pub fn layout(&self, n: i64) -> HomLayout {
        let g = self.source.groupoid();
        let e = self.source.bundle();
        let f = self.target.bundle();
        let (a_e, b_e) = e.amplitude();
        let (a_f, b_f) = f.amplitude();
        // Hom^{n-k} nonzero needs a_f - b_e <= n - k <= b_f - a_e
        let k_min = (n - (b_f - a_e)).max(0);
        let k_max = n - (a_f - b_e);
        let mut entries = Vec::new();
        let mut dim = 0;
        let mut k = k_min;
        while k <= k_max {
            let shift = n - k;
            for s in g.strings(k as usize) {
                for l in e.degrees() {
                    let cols = e.dim(s.source(g), l);
                    let rows = f.dim(s.moment(), l + shift);
                    if rows * cols == 0 {
                        continue;
                    }
                    entries.push((k as usize, s.clone(), l, rows, cols, dim));
                    dim += rows * cols;
                }
            }
            k += 1;
        }
        HomLayout { n, entries, dim }
    }

    /// Packs a tensor family (indexed by arbitrary `k`) into coordinates.
    pub fn to_vec(&self, layout: &HomLayout, family: &[Tensor<T>]) -> Vec<T> {
        let mut v = vec![T::zero(); layout.dim];
        for (k, s, l, rows, cols, off) in &layout.entries {
            if let Some(t) = family.iter().find(|t| t.k() == *k) {
                assert_eq!(t.shift(), layout.n - *k as i64, "family member of wrong degree");
                if let Some(block) = t.get(s).and_then(|m| m.block(*l)) {
                    for i in 0..*rows {
                        for j in 0..*cols {
                            v[off + i * cols + j] = block.get(i, j);
                        }
                    }
                }
            }
        }
        v
    }

    /// Reads coordinates back into a tensor family.
    pub fn to_family(&self, layout: &HomLayout, v: &[T]) -> Vec<Tensor<T>> {
        assert_eq!(v.len(), layout.dim);
        let mut family: Vec<Tensor<T>> = Vec::new();
        for (k, s, l, rows, cols, off) in &layout.entries {
            let mut block = Matrix::zero(*rows, *cols);
            for i in 0..*rows {
                for j in 0..*cols {
                    block.set(i, j, v[off + i * cols + j].clone());
                }
            }
            if block.is_zero() {
                continue;
            }
            if !family.iter().any(|t| t.k() == *k) {
                family.push(Tensor::zero(*k, layout.n - *k as i64));
            }
            let t = family.iter_mut().find(|t| t.k() == *k).unwrap();
            t.add_block(s.clone(), *l, &block, &T::one());
        }
        family
    }

    /// `D(Φ)_k = Σ_{i+j=k} R^F_j ⋆ Φ_i + dhat0(Φ_{k-1}) - (-1)^n Σ Φ_j ⋆ R^E_i`.
    pub fn differential(&self, n: i64, family: &[Tensor<T>]) -> Vec<Tensor<T>> {
        let g = self.source.groupoid().clone();
        let sgn: T = sign(n);
        let mut parts: Vec<Tensor<T>> = Vec::new();
        let mut push = |t: Tensor<T>| {
            if t.is_zero() {
                return;
            }
            if let Some(existing) = parts.iter_mut().find(|p| p.k() == t.k()) {
                *existing = existing.add(&t);
            } else {
                parts.push(t);
            }
        };
        for phi in family {
            assert_eq!(phi.shift(), n - phi.k() as i64, "family member of wrong degree");
            if phi.is_zero() {
                continue;
            }
            for rj in self.target.tensors() {
                if !rj.is_zero() {
                    push(end_star(&g, rj, phi));
                }
            }
            for ri in self.source.tensors() {
                if !ri.is_zero() {
                    push(end_star(&g, phi, ri).scale(&-sgn.clone()));
                }
            }
            push(dhat0_tensor(&g, phi));
        }
        parts
    }

    /// Matrix of the Hom differential from degree `n` to `n + 1`.
    pub fn differential_matrix(&self, n: i64) -> Matrix<T> {
        let from = self.layout(n);
        let to = self.layout(n + 1);
        let mut m = Matrix::zero(to.dim, from.dim);
        for col in 0..from.dim {
            let mut v = vec![T::zero(); from.dim];
            v[col] = T::one();
            let family = self.to_family(&from, &v);
            let image = self.differential(n, &family);
            let w = self.to_vec(&to, &image);
            for (row, x) in w.into_iter().enumerate() {
                if !x.is_zero() {
                    m.set(row, col, x);
                }
            }
        }
        m
    }

    /// Dimensions of `H^n(Hom^•(E, F))` over a window.
    pub fn cohomology_dims(&self, window: (i64, i64)) -> Vec<(i64, usize)> {
        let (n0, n1) = window;
        let mut out = Vec::new();
        for n in n0..=n1 {
            let d_prev = self.differential_matrix(n - 1);
            let d_n = self.differential_matrix(n);
            let kernel = self.layout(n).dim - d_n.rank();
            out.push((n, kernel - d_prev.rank()));
        }
        out
    }

    /// Dimension of the homotopy-class space `[E, F] = H^0`.
    pub fn homotopy_class_dim(&self) -> usize {
        self.cohomology_dims((0, 0))[0].1
    }

    /// Basis of closed degree-0 elements as morphisms.
    pub fn closed_degree_zero(&self) -> Vec<Morphism<T>> {
        let layout = self.layout(0);
        let d0 = self.differential_matrix(0);
        d0.kernel_basis()
            .basis_vectors()
            .into_iter()
            .map(|v| {
                let family = self.to_family(&layout, &v);
                Morphism::new(self.source.clone(), self.target.clone(), family)
                    .expect("degree-0 family is well-shaped")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{scalar_d, ScalarCochain};
    use num_traits::Zero;
    use crate::fixtures::{cocycle_rep, gauge_transform, random_gauge, random_strict_rep};
    use crate::groupoid::{cyclic_group, pair_groupoid};
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn identity_morphism_is_valid() {
        let g = cyclic_group(2);
        let rep: Rep<Rational> = random_strict_rep(&g, 3, (0, 1), false);
        let id = Morphism::identity(&rep);
        assert!(id.verify().is_valid());
    }

    #[test]
    fn gauge_morphisms_are_valid_quasi_isos() {
        for seed in [1u64, 2, 3] {
            let g = pair_groupoid(2);
            let rep: Rep<Rational> = random_strict_rep(&g, seed, (0, 2), false);
            let gauge = random_gauge(&rep, seed + 10);
            let (transformed, phi_tensors) = gauge_transform(&rep, &gauge);
            assert!(transformed.verify_structure().is_valid());
            let phi = Morphism::new(rep, transformed, phi_tensors).unwrap();
            assert!(phi.verify().is_valid(), "seed {seed}");
        }
    }

    #[test]
    fn phi1_with_zero_phi0_needs_face_terms_to_vanish() {
        // on reps with D = 0 (zero differential, zero action... closest
        // realizable: trivial lines over the unit groupoid) any Φ_1 must have
        // vanishing dhat0-terms; over a one-object unit groupoid all strings
        // are degenerate composites so the condition is automatic
        let g = crate::groupoid::unit_groupoid(1);
        let e: Rep<Rational> = Rep::trivial_line(g.clone(), 0);
        let f: Rep<Rational> = Rep::trivial_line(g.clone(), -1);
        // Φ_1: C^1(Hom^{-1}(E, F)): at the unit string, block l=0 of size 1x1
        let mut phi1 = Tensor::zero(1, -1);
        let mut m = GradedMap::zero(-1);
        let mut b = Matrix::zero(1, 1);
        b.set(0, 0, q(2));
        m.set_block(0, b);
        phi1.set(GString::from_arrows(&g, vec![g.unit(crate::groupoid::ObjId(0))]).unwrap(), m);
        let phi = Morphism::new(e, f, vec![Tensor::zero(0, 0), phi1]).unwrap();
        let report = phi.verify();
        // residual at k = 2: R'∘Φ and Φ∘R vanish, faces of Φ_1 survive:
        // Φ_1(g_1 g_2) on the unit-unit string equals Φ_1(1) twice with signs
        // ... the literal evaluation decides; commutation route must agree
        let _ = report.is_valid();
    }

    #[test]
    fn connection_comparison_shape_built_by_linear_solve() {
        // synthetic data with R_0, R_1, R_2 and a morphism Ψ = Ψ_0 + Ψ_1
        // between two gauge-related representations: Ψ_1 is found by solving
        // the k = 1, 2 morphism equations as a linear system, then the full
        // verifier must accept
        let g = cyclic_group(2);
        let sigma = g.arrow_by_name("g1").unwrap();
        let f1: ScalarCochain<Rational> =
            Cochain::delta(1, 0, GString::from_arrows(&g, vec![sigma]).unwrap(), vec![q(1)]);
        let eta = scalar_d(&g, &f1);
        let e = cocycle_rep(&g, 2, &eta);
        let gauge = random_gauge(&e, 77);
        let (e2, _) = gauge_transform(&e, &gauge);

        // unknowns: Ψ_1 blocks on the two 1-strings; Ψ_0 = identity
        let id = Tensor::identity(&g, e.bundle());
        // set up the linear system by probing residuals: residual(k) is affine
        // in Ψ_1, so solve residual(Ψ_1) = residual(0) - A·ψ = 0 by sampling
        let strings: Vec<GString> =
            g.arrows().map(|a| GString::from_arrows(&g, vec![a]).unwrap()).collect();
        // coordinates of Ψ_1: one 1x1 block per 1-string at source degree 1
        let n_unknowns = strings.len();
        let build = |coords: &[Rational]| -> Morphism<Rational> {
            let mut psi1 = Tensor::zero(1, -1);
            for (s, c) in strings.iter().zip(coords) {
                if !c.is_zero() {
                    let mut m = GradedMap::zero(-1);
                    let mut b = Matrix::zero(1, 1);
                    b.set(0, 0, c.clone());
                    m.set_block(1, b);
                    psi1.set(s.clone(), m);
                }
            }
            Morphism::new(e.clone(), e2.clone(), vec![id.clone(), psi1]).unwrap()
        };
        let residual_vec = |m: &Morphism<Rational>| -> Vec<Rational> {
            let mut out = Vec::new();
            for k in 0..=4usize {
                let r = m.residual(k);
                for s in g.strings(k) {
                    for l in 0..=1i64 {
                        let v = r
                            .get(&s)
                            .and_then(|gm| gm.block(l))
                            .map(|b| b.get(0, 0))
                            .unwrap_or_else(|| q(0));
                        out.push(v);
                    }
                }
            }
            out
        };
        let zero_coords = vec![q(0); n_unknowns];
        let base = residual_vec(&build(&zero_coords));
        let mut cols = Vec::new();
        for j in 0..n_unknowns {
            let mut coords = zero_coords.clone();
            coords[j] = q(1);
            let r = residual_vec(&build(&coords));
            let col: Vec<Rational> =
                r.iter().zip(&base).map(|(a, b)| a.clone() - b.clone()).collect();
            cols.push(col);
        }
        let a = Matrix::from_rows(
            (0..base.len())
                .map(|i| cols.iter().map(|c| c[i].clone()).collect())
                .collect(),
        );
        let rhs: Vec<Rational> = base.iter().map(|x| -x.clone()).collect();
        let solution = a.solve(&rhs).expect("the two morphism equations are solvable");
        let psi = build(&solution);
        assert!(psi.verify().is_valid());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let g = cyclic_group(2);
        let rep: Rep<Rational> = random_strict_rep(&g, 11, (0, 1), false);
        let cone = Morphism::identity(&rep).mapping_cone().unwrap();
        assert!(cone.verify_structure().is_valid());
        let dims = cone.cohomology_unchecked((-2, 3));
        for (n, d) in dims {
            assert_eq!(d, 0, "cone of identity must be acyclic in degree {n}");
        }
    }

    #[test]
    fn cone_of_zero_adds_cohomologies() {
        let g = cyclic_group(2);
        let e: Rep<Rational> = Rep::trivial(g.clone());
        let f: Rep<Rational> = Rep::trivial(g.clone());
        let zero = Morphism::zero(e.clone(), f.clone());
        let cone = zero.mapping_cone().unwrap();
        assert!(cone.verify_structure().is_valid());
        let dims_e = e.cohomology_unchecked((-1, 3));
        let dims_f = f.cohomology_unchecked((-2, 2));
        let dims_cone = cone.cohomology_unchecked((-1, 3));
        // C(zero) = E ⊕ F[-1]: H^n(cone) = H^n(E) + H^{n-1}(F)
        for (i, (n, d)) in dims_cone.iter().enumerate() {
            assert_eq!(*d, dims_e[i].1 + dims_f[i].1, "degree {n}");
        }
    }

    #[test]
    fn cone_differential_at_k0_matches_displayed_formula() {
        // ∂(e, f) = (∂ e, Φ_0 e - ∂ f)
        let g = crate::groupoid::unit_groupoid(1);
        let bundle = GradedBundle::new(0, 1, vec![vec![1, 1]]);
        let mk_partial = |val: i64| {
            let mut t = Tensor::zero(0, 1);
            let mut m = GradedMap::zero(1);
            let mut b = Matrix::zero(1, 1);
            b.set(0, 0, q(val));
            m.set_block(0, b);
            t.set(GString::object(crate::groupoid::ObjId(0)), m);
            t
        };
        let lambda = {
            let mut t = Tensor::zero(1, 0);
            let mut m = GradedMap::zero(0);
            m.set_block(0, Matrix::identity(1));
            m.set_block(1, Matrix::identity(1));
            t.set(GString::from_arrows(&g, vec![g.unit(crate::groupoid::ObjId(0))]).unwrap(), m);
            t
        };
        let e = Rep::strict(g.clone(), bundle.clone(), mk_partial(2), lambda.clone()).unwrap();
        let f = Rep::strict(g.clone(), bundle, mk_partial(3), lambda).unwrap();
        // Φ_0 = 5 in degree 0 and 5 in degree 1 is a chain map only if it
        // commutes: 5∂ = ∂5, fine with equal scalars
        let mut phi0 = Tensor::zero(0, 0);
        let mut m = GradedMap::zero(0);
        let mut b = Matrix::zero(1, 1);
        b.set(0, 0, q(5));
        m.set_block(0, b.clone());
        // degree-1 block must intertwine: x·2 = 3·5 => x = 15/2
        let mut b1 = Matrix::zero(1, 1);
        b1.set(0, 0, Rational::new(15.into(), 2.into()));
        m.set_block(1, b1);
        phi0.set(GString::object(crate::groupoid::ObjId(0)), m);
        let phi = Morphism::new(e, f, vec![phi0]).unwrap();
        assert!(phi.verify().is_valid());
        let cone = phi.mapping_cone().unwrap();
        let r0 = cone.differential_at(crate::groupoid::ObjId(0));
        // cone degree 0 fiber = E^0; degree 1 = E^1 ⊕ F^0: ∂(e) = (∂e, Φ e)
        let block0 = r0.block(0).unwrap();
        assert_eq!(block0.get(0, 0), q(2));
        assert_eq!(block0.get(1, 0), q(5));
        // cone degree 1 -> 2 = F^1: ∂(e^1, f^0) = (Φ e - ∂ f)
        let block1 = r0.block(1).unwrap();
        assert_eq!(block1.get(0, 0), Rational::new(15.into(), 2.into()));
        assert_eq!(block1.get(0, 1), q(-3));
    }

    #[test]
    fn hom_complex_closed_degree_zero_are_exactly_morphisms() {
        let g = cyclic_group(2);
        let e: Rep<Rational> = random_strict_rep(&g, 21, (0, 1), false);
        let f: Rep<Rational> = random_strict_rep(&g, 22, (0, 1), false);
        let hom = HomComplex::new(e.clone(), f.clone()).unwrap();
        for m in hom.closed_degree_zero() {
            assert!(m.verify().is_valid());
        }
        // and a valid morphism is closed: the zero morphism plus identity test
        let id = Morphism::identity(&e);
        let hom_ee = HomComplex::new(e.clone(), e.clone()).unwrap();
        let layout = hom_ee.layout(0);
        let v = hom_ee.to_vec(&layout, id.tensors());
        let d0 = hom_ee.differential_matrix(0);
        assert!(d0.mul_vec(&v).iter().all(Rational::is_zero));
    }

    #[test]
    fn hom_differential_squares_to_zero() {
        let g = cyclic_group(2);
        let e: Rep<Rational> = random_strict_rep(&g, 52, (0, 1), false);
        let f: Rep<Rational> = {
            let gauge = random_gauge(&e, 53);
            gauge_transform(&e, &gauge).0
        };
        let hom = HomComplex::new(e, f).unwrap();
        for n in -2..=1i64 {
            let d_n = hom.differential_matrix(n);
            let d_n1 = hom.differential_matrix(n + 1);
            assert!(d_n1.mul(&d_n).is_zero(), "Hom differential fails d^2 = 0 at degree {n}");
        }
    }

    #[test]
    fn acyclic_rep_has_no_homotopy_classes() {
        // identity on an acyclic representation is null-homotopic: [E,E] = 0
        let g = cyclic_group(2);
        let e: Rep<Rational> = random_strict_rep(&g, 51, (0, 1), true);
        let hom = HomComplex::new(e.clone(), e).unwrap();
        assert_eq!(hom.homotopy_class_dim(), 0);
    }

    #[test]
    fn identity_class_is_nonzero_when_cohomology_survives() {
        let g = cyclic_group(2);
        let e: Rep<Rational> = Rep::trivial(g.clone());
        let hom = HomComplex::new(e.clone(), e.clone()).unwrap();
        let layout = hom.layout(0);
        let id = Morphism::identity(&e);
        let v = hom.to_vec(&layout, id.tensors());
        // the identity is closed and not a boundary
        let boundaries = hom.differential_matrix(-1).image_basis();
        assert!(!boundaries.contains(&v), "identity class must be nonzero");
    }

    #[test]
    fn homotopy_classes_trivial_line_over_z2() {
        // [triv, triv] over Z/2 has dimension 1 (H^0 of the Hom complex is
        // the invariants of the dual⊗... here just the base field)
        let g = cyclic_group(2);
        let e: Rep<Rational> = Rep::trivial(g.clone());
        let hom = HomComplex::new(e.clone(), e).unwrap();
        assert_eq!(hom.homotopy_class_dim(), 1);
    }
}
