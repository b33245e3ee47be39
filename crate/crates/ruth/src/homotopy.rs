//! Contractions and homological perturbation: fiberwise Hodge-style
//! contractions, the geometric-series homotopy on cochains, inversion of
//! quasi-isomorphisms through the mapping cone, and transfer of a unital
//! representation to its cohomology.
//!
//! Sign convention, used uniformly: contracting homotopies satisfy
//! `h ∂ + ∂ h + Id = i p` (so `h ∂ + ∂ h + Id = 0` on acyclic complexes),
//! together with the side conditions `h² = 0`, `p i = Id`, `h i = 0`,
//! `p h = 0`.  This forces `h = -Δ⁺ ∂*` for the Laplacian `Δ = ∂∂* + ∂*∂`
//! of the standard inner product in the canonical bases.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cochain::{
    merge_pieces, module_action, module_star, tensors_from_operator, Cochain, GradedBundle,
    GradedMap, ScalarCochain, Tensor,
};
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GString};
use crate::linalg::Matrix;
use crate::morphism::Morphism;
use crate::rep::Rep;
use crate::scalar::Scalar;

/// Fiberwise contraction data: the homotopy `h`, the inclusion of and
/// projection onto the harmonic (cohomology) subspaces, per object.
#[derive(Clone, Debug)]
pub struct FiberContraction<T> {
    /// cohomology bundle: harmonic dimensions per object and degree
    pub h_bundle: GradedBundle,
    /// degree -1 homotopy, `E -> E`
    pub h: Tensor<T>,
    /// harmonic inclusion, `H -> E`
    pub incl: Tensor<T>,
    /// harmonic projection, `E -> H`
    pub proj: Tensor<T>,
}

/// Builds the canonical contraction of a fiberwise complex `(bundle, ∂)`.
///
/// Per object and degree: harmonic space `ker Δ`, `h = -Δ⁺ ∂*` with the exact
/// pseudo-inverse `Δ⁺ = (Δ + P)^{-1} (Id - P)` for the orthogonal projector
/// `P` onto `ker Δ`.  All five contraction identities are asserted exactly.
pub fn contract_fibers<T: Scalar>(
    g: &FiniteGroupoid,
    bundle: &GradedBundle,
    partial: &Tensor<T>,
) -> Result<FiberContraction<T>> {
    let (a, b) = bundle.amplitude();
    let mut h_dims: Vec<Vec<usize>> = Vec::new();
    let mut h_tensor = Tensor::zero(0, -1);
    let mut incl = Tensor::zero(0, 0);
    let mut proj = Tensor::zero(0, 0);

    for x in g.objects() {
        let d_at = |l: i64| -> Matrix<T> {
            let rows = bundle.dim(x, l + 1);
            let cols = bundle.dim(x, l);
            partial
                .get(&GString::object(x))
                .and_then(|m| m.block(l))
                .cloned()
                .unwrap_or_else(|| Matrix::zero(rows, cols))
        };

        let mut dims_row = Vec::new();
        let mut h_map = GradedMap::zero(-1);
        let mut i_map = GradedMap::zero(0);
        let mut p_map = GradedMap::zero(0);
        // per-degree pieces, then identities assembled below
        let mut projectors: BTreeMap<i64, Matrix<T>> = BTreeMap::new();
        let mut pseudo: BTreeMap<i64, Matrix<T>> = BTreeMap::new();

        for l in a..=b {
            let n = bundle.dim(x, l);
            if n == 0 {
                dims_row.push(0);
                continue;
            }
            let d_l = d_at(l);
            let d_below = d_at(l - 1);
            let lap = d_l.transpose().mul(&d_l).add(&d_below.mul(&d_below.transpose()));
            let harmonic = lap.kernel_basis();
            dims_row.push(harmonic.dim());
            // inclusion: harmonic basis vectors as columns
            let mut i_l = Matrix::zero(n, harmonic.dim());
            for (j, v) in harmonic.basis_vectors().iter().enumerate() {
                for (r, val) in v.iter().enumerate() {
                    if !val.is_zero() {
                        i_l.set(r, j, val.clone());
                    }
                }
            }
            if harmonic.dim() > 0 {
                let gram = i_l.transpose().mul(&i_l);
                let p_l = gram.invert_spd().expect("Gram matrix is SPD").mul(&i_l.transpose());
                projectors.insert(l, i_l.mul(&p_l));
                i_map.set_block(l, i_l);
                p_map.set_block(l, p_l);
            } else {
                projectors.insert(l, Matrix::zero(n, n));
            }
            let p_harm = projectors[&l].clone();
            let id = Matrix::identity(n);
            let plus = lap.add(&p_harm).invert_spd().expect("Δ + P is SPD");
            pseudo.insert(l, plus.mul(&id.sub(&p_harm)));
        }

        // h at degree l maps E^l -> E^{l-1}: -Δ⁺_{l-1} ∂*_{l-1}
        for l in a + 1..=b {
            let n = bundle.dim(x, l);
            let m = bundle.dim(x, l - 1);
            if n == 0 || m == 0 {
                continue;
            }
            let block = pseudo[&(l - 1)].mul(&d_at(l - 1).transpose()).neg();
            h_map.set_block(l, block);
        }

        // exact identity checks per degree
        for l in a..=b {
            let n = bundle.dim(x, l);
            if n == 0 {
                continue;
            }
            let id = Matrix::identity(n);
            let h_l = h_map.block(l).cloned().unwrap_or_else(|| Matrix::zero(bundle.dim(x, l - 1), n));
            let h_l1 =
                h_map.block(l + 1).cloned().unwrap_or_else(|| Matrix::zero(n, bundle.dim(x, l + 1)));
            let lhs = d_at(l - 1).mul(&h_l).add(&h_l1.mul(&d_at(l)));
            let ip = projectors[&l].clone();
            assert_eq!(lhs, ip.sub(&id), "h∂ + ∂h + Id = ip fails at degree {l}");
            if bundle.dim(x, l - 2) > 0 {
                let h_below = h_map
                    .block(l - 1)
                    .cloned()
                    .unwrap_or_else(|| Matrix::zero(bundle.dim(x, l - 2), bundle.dim(x, l - 1)));
                assert!(h_below.mul(&h_l).is_zero(), "h² = 0 fails at degree {l}");
            }
            if let (Some(i_l), Some(p_l)) = (i_map.block(l), p_map.block(l)) {
                assert_eq!(p_l.mul(i_l), Matrix::identity(i_l.cols()), "p i = Id fails");
                assert!(h_l.mul(i_l).is_zero(), "h i = 0 fails");
                if let Some(p_prev) = p_map.block(l - 1) {
                    assert!(p_prev.mul(&h_l).is_zero(), "p h = 0 fails");
                }
            }
        }

        h_dims.push(dims_row);
        let obj = GString::object(x);
        if !h_map.is_zero() {
            h_tensor.set(obj.clone(), h_map);
        }
        if !i_map.is_zero() {
            incl.set(obj.clone(), i_map);
        }
        if !p_map.is_zero() {
            proj.set(obj, p_map);
        }
    }

    Ok(FiberContraction {
        h_bundle: GradedBundle::new(a, b, h_dims),
        h: h_tensor,
        incl,
        proj,
    })
}

/// Contraction of an acyclic fiberwise complex; `NotAcyclic` names the first
/// object and degree with surviving cohomology.
pub fn contract_complex<T: Scalar>(
    g: &FiniteGroupoid,
    bundle: &GradedBundle,
    partial: &Tensor<T>,
) -> Result<FiberContraction<T>> {
    let c = contract_fibers(g, bundle, partial)?;
    for x in g.objects() {
        for l in bundle.degrees() {
            if c.h_bundle.dim(x, l) > 0 {
                return Err(Error::NotAcyclic {
                    object: g.object_name(x).to_string(),
                    degree: l,
                });
            }
        }
    }
    Ok(c)
}

/// The geometric-series homotopy `H = h (1 + δh + (δh)² + ...)` on `C(G; E)`
/// for a representation with acyclic underlying complex; satisfies
/// `H D + D H + Id = 0` and is `C(G)`-linear.
pub struct RuthContraction<T> {
    rep: Rep<T>,
    hhat: Tensor<T>,
    /// per total degree: smallest `m` with `(δh)^m = 0` observed on a basis
    pub nilpotency: BTreeMap<i64, usize>,
}

impl<T: Scalar> RuthContraction<T> {
    /// `δ(η) = D(η) - R_0 ⋆ η`: the filtration-raising part of `D`.
    fn apply_delta(&self, pieces: &[Cochain<T>]) -> Vec<Cochain<T>> {
        let g = self.rep.groupoid();
        let mut out = Vec::new();
        for piece in pieces {
            for (k, t) in self.rep.tensors().iter().enumerate() {
                if k == 0 || t.is_zero() {
                    continue;
                }
                let part = module_action(g, t, piece);
                if !part.is_zero() {
                    out.push(part);
                }
            }
            let face = crate::cochain::dhat0_full(g, piece);
            if !face.is_zero() {
                out.push(face);
            }
        }
        merge_pieces(out)
    }

    fn apply_hhat(&self, pieces: &[Cochain<T>]) -> Vec<Cochain<T>> {
        let g = self.rep.groupoid();
        merge_pieces(pieces.iter().map(|p| module_action(g, &self.hhat, p)).collect())
    }

    /// Applies `H` to one bidegree piece, recording the series length.
    pub fn apply(&self, eta: &Cochain<T>) -> (Vec<Cochain<T>>, usize) {
        let mut acc = self.apply_hhat(std::slice::from_ref(eta));
        let mut term = acc.clone();
        let mut steps = 0;
        loop {
            term = self.apply_hhat(&self.apply_delta(&term));
            if term.is_empty() {
                break;
            }
            steps += 1;
            acc.extend(term.iter().cloned());
            acc = merge_pieces(acc);
        }
        (acc, steps)
    }

    /// Matrix of `H` from total degree `n` to `n - 1`.
    pub fn matrix(&mut self, n: i64) -> Matrix<T> {
        let from = self.rep.layout(n);
        let to = self.rep.layout(n - 1);
        let mut m = Matrix::zero(to.dim, from.dim);
        let mut col = 0;
        let mut max_steps = 0;
        for comp in &from.comps {
            for eta in comp.basis::<T>() {
                let (image, steps) = self.apply(&eta);
                max_steps = max_steps.max(steps);
                let v = to.pack(&image);
                for (row, x) in v.into_iter().enumerate() {
                    if !x.is_zero() {
                        m.set(row, col, x);
                    }
                }
                col += 1;
            }
        }
        let entry = self.nilpotency.entry(n).or_insert(0);
        *entry = (*entry).max(max_steps + 1);
        m
    }

    /// Verifies `H D + D H + Id = 0` on every basis vector of the window and
    /// `C(G)`-linearity on a spanning set; asserts the nilpotency bound.
    pub fn verify(&mut self, window: (i64, i64)) -> Result<()> {
        let (n0, n1) = window;
        for n in n0..=n1 {
            let id = Matrix::identity(self.rep.layout(n).dim);
            let sum = self
                .matrix(n + 1)
                .mul(&self.rep.structure_matrix(n))
                .add(&self.rep.structure_matrix(n - 1).mul(&self.matrix(n)))
                .add(&id);
            if !sum.is_zero() {
                return Err(Error::DimMismatch {
                    reason: format!("HD + DH + Id != 0 in total degree {n}"),
                });
            }
        }
        let bound = self.rep.bundle().width() + 1;
        for (&n, &m) in &self.nilpotency {
            assert!(m <= bound, "nilpotency index {m} exceeds width bound {bound} at degree {n}");
        }
        // C(G)-linearity on a spanning set
        let g = self.rep.groupoid().clone();
        let (a, b) = self.rep.bundle().amplitude();
        for l in a..=b {
            for k in 0..=1usize {
                let layout = crate::cochain::BidegreeLayout::new(&g, self.rep.bundle(), k, l);
                for eta in layout.basis::<T>() {
                    for kf in 0..=1usize {
                        for s in g.strings(kf) {
                            let f: ScalarCochain<T> = Cochain::delta(kf, 0, s, vec![T::one()]);
                            let lhs = merge_pieces(
                                self.apply(&module_star(&g, &eta, &f)).0,
                            );
                            let rhs = merge_pieces(
                                self.apply(&eta)
                                    .0
                                    .iter()
                                    .map(|p| module_star(&g, p, &f))
                                    .collect(),
                            );
                            if lhs != rhs {
                                return Err(Error::DimMismatch {
                                    reason: "H is not C(G)-linear".into(),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds the contraction of `C(G; E)` for a representation whose underlying
/// complex is fiberwise acyclic.
pub fn contract_ruth<T: Scalar>(rep: &Rep<T>) -> Result<RuthContraction<T>> {
    let report = rep.verify_structure();
    if !report.is_valid() {
        return Err(Error::StructureEquationsViolated { k: report.violations[0].k });
    }
    let fibers = contract_complex(rep.groupoid(), rep.bundle(), &rep.r(0))?;
    Ok(RuthContraction { rep: rep.clone(), hhat: fibers.h, nilpotency: BTreeMap::new() })
}

/// Operator family: one matrix per total degree.
pub type OperatorFamily<T> = BTreeMap<i64, Matrix<T>>;

/// Output of [`invert_quasi_iso`]: the homotopy inverse and the two
/// homotopies, with the window on which the identities were verified.
#[derive(Debug)]
pub struct QuasiIsoInverse<T> {
    pub psi: Morphism<T>,
    pub h1: OperatorFamily<T>,
    pub h2: OperatorFamily<T>,
    pub window: (i64, i64),
}

/// Checks that `Φ_0` induces isomorphisms on fiber cohomology, returning the
/// witness object and degree otherwise.
fn check_pointwise_quasi_iso<T: Scalar>(phi: &Morphism<T>) -> Result<()> {
    let g = phi.source().groupoid().clone();
    let ce = contract_fibers(&g, phi.source().bundle(), &phi.source().r(0))?;
    let cf = contract_fibers(&g, phi.target().bundle(), &phi.target().r(0))?;
    let phi0 = phi.phi(0);
    for x in g.objects() {
        let obj = GString::object(x);
        for l in phi.source().bundle().degrees().chain(phi.target().bundle().degrees()) {
            let de = ce.h_bundle.dim(x, l);
            let df = cf.h_bundle.dim(x, l);
            if de != df {
                return Err(Error::NotQuasiIso {
                    object: g.object_name(x).to_string(),
                    degree: l,
                });
            }
            if de == 0 {
                continue;
            }
            // induced map on harmonic representatives: p_F ∘ Φ_0 ∘ i_E
            let i_e = ce.incl.get(&obj).and_then(|m| m.block(l)).cloned().unwrap();
            let p_f = cf.proj.get(&obj).and_then(|m| m.block(l)).cloned().unwrap();
            let f0 = phi0
                .get(&obj)
                .and_then(|m| m.block(l))
                .cloned()
                .unwrap_or_else(|| Matrix::zero(phi.target().bundle().dim(x, l), phi.source().bundle().dim(x, l)));
            let induced = p_f.mul(&f0).mul(&i_e);
            if induced.rank() < de {
                return Err(Error::NotQuasiIso {
                    object: g.object_name(x).to_string(),
                    degree: l,
                });
            }
        }
    }
    Ok(())
}

/// Inverts a quasi-isomorphism up to homotopy: contracts the mapping cone and
/// reads the inverse and the two homotopies out of the block structure of the
/// contraction operator.  Both homotopy identities are verified exactly on
/// the returned window.
pub fn invert_quasi_iso<T: Scalar>(phi: &Morphism<T>) -> Result<QuasiIsoInverse<T>> {
    phi.require_valid()?;
    check_pointwise_quasi_iso(phi)?;
    let cone = phi.mapping_cone()?;
    let contraction = contract_ruth(&cone)?;

    let g = phi.source().groupoid().clone();
    let e_bundle = phi.source().bundle().clone();
    let f_bundle = phi.target().bundle().clone();
    let cone_bundle = cone.bundle().clone();

    // cone fiber at degree m: E^m first, then F^{m-1}
    let embed_f = |piece: &Cochain<T>| -> Cochain<T> {
        let mut out = Cochain::zero(piece.k(), piece.l() + 1);
        for (s, v) in piece.iter() {
            let x = s.moment();
            let m = piece.l() + 1;
            let mut w = vec![T::zero(); cone_bundle.dim(x, m)];
            let off = e_bundle.dim(x, m);
            for (i, val) in v.iter().enumerate() {
                w[off + i] = val.clone();
            }
            out.set(s.clone(), w);
        }
        out
    };
    let project_e = |piece: &Cochain<T>| -> Cochain<T> {
        let mut out = Cochain::zero(piece.k(), piece.l());
        for (s, v) in piece.iter() {
            let x = s.moment();
            let d = e_bundle.dim(x, piece.l());
            if d == 0 {
                continue;
            }
            out.set(s.clone(), v[..d].to_vec());
        }
        out
    };
    let project_f = |piece: &Cochain<T>| -> Cochain<T> {
        let mut out = Cochain::zero(piece.k(), piece.l() - 1);
        for (s, v) in piece.iter() {
            let x = s.moment();
            let off = e_bundle.dim(x, piece.l());
            let d = f_bundle.dim(x, piece.l() - 1);
            if d == 0 {
                continue;
            }
            out.set(s.clone(), v[off..off + d].to_vec());
        }
        out
    };

    // Ψ = -(E-part of H on the F-summand), C(G)-linear of degree 0
    let psi_apply = |piece: &Cochain<T>| -> Vec<Cochain<T>> {
        let embedded = embed_f(piece);
        let (image, _) = contraction.apply(&embedded);
        merge_pieces(image.iter().map(|p| project_e(p).scale(&-T::one())).collect())
    };
    let bound = {
        let (_, b_f) = f_bundle.amplitude();
        let (a_e, _) = e_bundle.amplitude();
        (b_f - a_e).max(0) as usize
    };
    let psi_tensors =
        tensors_from_operator(&g, &f_bundle, &e_bundle, 0, bound, false, &psi_apply);
    let psi = Morphism::new(phi.target().clone(), phi.source().clone(), psi_tensors)?;
    psi.require_valid()?;

    // homotopies: h1 = E-block, h2 = -(F-block) of H, per total degree
    let (a_c, b_c) = cone_bundle.amplitude();
    let window = (a_c - 1, b_c + 1);
    let mut h1 = OperatorFamily::new();
    let mut h2 = OperatorFamily::new();
    for n in window.0..=window.1 {
        // restrict H_n to the E/F summands via the piece-level maps
        let e_layout = phi.source().layout(n);
        let e_to = phi.source().layout(n - 1);
        let mut m1 = Matrix::zero(e_to.dim, e_layout.dim);
        let mut col = 0;
        for comp in &e_layout.comps {
            for eta in comp.basis::<T>() {
                // embed E-piece: E^m sits first in cone^m
                let mut cone_piece = Cochain::zero(eta.k(), eta.l());
                for (s, v) in eta.iter() {
                    let x = s.moment();
                    let mut w = vec![T::zero(); cone_bundle.dim(x, eta.l())];
                    for (i, val) in v.iter().enumerate() {
                        w[i] = val.clone();
                    }
                    cone_piece.set(s.clone(), w);
                }
                let (image, _) = contraction.apply(&cone_piece);
                let pieces: Vec<Cochain<T>> =
                    merge_pieces(image.iter().map(&project_e).collect());
                let v = e_to.pack(&pieces);
                for (row, x) in v.into_iter().enumerate() {
                    if !x.is_zero() {
                        m1.set(row, col, x);
                    }
                }
                col += 1;
            }
        }
        h1.insert(n, m1);

        let f_layout = phi.target().layout(n);
        let f_to = phi.target().layout(n - 1);
        let mut m2 = Matrix::zero(f_to.dim, f_layout.dim);
        let mut col = 0;
        for comp in &f_layout.comps {
            for eta in comp.basis::<T>() {
                let embedded = embed_f(&eta);
                let (image, _) = contraction.apply(&embedded);
                let pieces: Vec<Cochain<T>> = merge_pieces(
                    image.iter().map(|p| project_f(p).scale(&-T::one())).collect(),
                );
                let v = f_to.pack(&pieces);
                for (row, x) in v.into_iter().enumerate() {
                    if !x.is_zero() {
                        m2.set(row, col, x);
                    }
                }
                col += 1;
            }
        }
        h2.insert(n, m2);
    }
    // exact homotopy identities on the window interior
    for n in window.0 + 1..=window.1 - 1 {
        let psi_phi = psi.matrix(n).mul(&phi.matrix(n));
        let id_e = Matrix::identity(phi.source().layout(n).dim);
        let rhs = phi.source().structure_matrix(n - 1).mul(&h1[&n]).add(
            &h1[&(n + 1)].mul(&phi.source().structure_matrix(n)),
        );
        if psi_phi.sub(&id_e) != rhs {
            return Err(Error::DimMismatch {
                reason: format!("ΨΦ - Id != D h1 + h1 D in degree {n}"),
            });
        }
        let phi_psi = phi.matrix(n).mul(&psi.matrix(n));
        let id_f = Matrix::identity(phi.target().layout(n).dim);
        let rhs = phi.target().structure_matrix(n - 1).mul(&h2[&n]).add(
            &h2[&(n + 1)].mul(&phi.target().structure_matrix(n)),
        );
        if phi_psi.sub(&id_f) != rhs {
            return Err(Error::DimMismatch {
                reason: format!("ΦΨ - Id != D h2 + h2 D in degree {n}"),
            });
        }
    }

    Ok(QuasiIsoInverse { psi, h1, h2, window: (window.0 + 1, window.1 - 1) })
}

/// Output of [`transfer_to_cohomology`].
#[derive(Debug)]
pub struct Transfer<T> {
    /// the representation on the cohomology bundle, `R_0 = 0`
    pub small: Rep<T>,
    /// the quasi-isomorphism `E -> H(E)` with `Φ_0` the projection
    pub phi: Morphism<T>,
}

/// Pushes a unital representation to its fiber cohomology by homological
/// perturbation:
///
/// - small structure operator `D' = p ∘ δ ∘ Σ_j (hδ)^j ∘ i`,
/// - projection morphism `Φ = p ∘ Σ_j (δh)^j`,
///
/// with `δ = D - L_{R_0}` and the fiberwise harmonic contraction.  Both
/// outputs are re-verified (structure equations, morphism equations); the
/// cohomology of `C(G;E)` and `C(G;H(E))` is compared degreewise over the
/// amplitude window.
pub fn transfer_to_cohomology<T: Scalar>(rep: &Rep<T>) -> Result<Transfer<T>> {
    rep.require_unital()?;
    let report = rep.verify_structure();
    if !report.is_valid() {
        return Err(Error::StructureEquationsViolated { k: report.violations[0].k });
    }
    let g: Arc<FiniteGroupoid> = rep.groupoid().clone();
    let fibers = contract_fibers(&g, rep.bundle(), &rep.r(0))?;
    let small_bundle = fibers.h_bundle.clone();

    // cohomology dims must be orbit-constant for unital representations
    let orbits = g.object_orbits();
    for x in g.objects() {
        for y in g.objects() {
            if orbits[x.0] != orbits[y.0] {
                continue;
            }
            for l in small_bundle.degrees() {
                if small_bundle.dim(x, l) != small_bundle.dim(y, l) {
                    return Err(Error::OrbitDimMismatch {
                        x: g.object_name(x).to_string(),
                        y: g.object_name(y).to_string(),
                        degree: l,
                    });
                }
            }
        }
    }

    let apply_delta = |pieces: &[Cochain<T>]| -> Vec<Cochain<T>> {
        let mut out = Vec::new();
        for piece in pieces {
            for (k, t) in rep.tensors().iter().enumerate() {
                if k == 0 || t.is_zero() {
                    continue;
                }
                let part = module_action(&g, t, piece);
                if !part.is_zero() {
                    out.push(part);
                }
            }
            let face = crate::cochain::dhat0_full(&g, piece);
            if !face.is_zero() {
                out.push(face);
            }
        }
        merge_pieces(out)
    };
    let apply_h = |pieces: &[Cochain<T>]| -> Vec<Cochain<T>> {
        merge_pieces(pieces.iter().map(|p| module_action(&g, &fibers.h, p)).collect())
    };

    // D' = p δ Σ (hδ)^j i
    let d_small = |eta: &Cochain<T>| -> Vec<Cochain<T>> {
        let included = module_action(&g, &fibers.incl, eta);
        let mut series = vec![included.clone()];
        let mut term = vec![included];
        loop {
            term = apply_h(&apply_delta(&term));
            if term.is_empty() {
                break;
            }
            series.extend(term.iter().cloned());
            series = merge_pieces(series);
        }
        let after_delta = apply_delta(&series);
        merge_pieces(
            after_delta.iter().map(|p| module_action(&g, &fibers.proj, p)).collect(),
        )
    };
    let small_tensors = tensors_from_operator(
        &g,
        &small_bundle,
        &small_bundle,
        1,
        small_bundle.width() + 1,
        true,
        &d_small,
    );
    // R'_0 must vanish: the small complex carries the zero differential
    assert!(small_tensors[0].is_zero(), "transferred differential must vanish");
    let small = Rep::new(g.clone(), small_bundle.clone(), small_tensors)?;
    let small_report = small.verify_structure();
    if !small_report.is_valid() {
        return Err(Error::StructureEquationsViolated { k: small_report.violations[0].k });
    }

    // the induced quasi-action is an action on cohomology:
    // λ̄_g λ̄_{g^{-1}} = Id, hence orbit-constant dims were consistent
    let lam = small.r(1);
    for arr in g.arrows() {
        let s = GString::from_arrows(&g, vec![arr]).unwrap();
        let s_inv = GString::from_arrows(&g, vec![g.inv(arr)]).unwrap();
        let a = lam.get(&s).cloned().unwrap_or_else(|| GradedMap::zero(0));
        let b = lam.get(&s_inv).cloned().unwrap_or_else(|| GradedMap::zero(0));
        let prod = a.compose(&b);
        let id = GradedMap::identity(&small_bundle, g.tgt(arr));
        assert_eq!(prod, id, "induced action must be invertible along each arrow");
    }

    // Φ = p Σ (δh)^j
    let phi_apply = |eta: &Cochain<T>| -> Vec<Cochain<T>> {
        let mut series = vec![eta.clone()];
        let mut term = vec![eta.clone()];
        loop {
            term = apply_delta(&apply_h(&term));
            if term.is_empty() {
                break;
            }
            series.extend(term.iter().cloned());
            series = merge_pieces(series);
        }
        merge_pieces(
            series.iter().map(|p| module_action(&g, &fibers.proj, p)).collect(),
        )
    };
    let bound = {
        let (_, b_e) = rep.bundle().amplitude();
        let (a_h, _) = small_bundle.amplitude();
        (b_e - a_h).max(0) as usize
    };
    let phi_tensors =
        tensors_from_operator(&g, rep.bundle(), &small_bundle, 0, bound, false, &phi_apply);
    assert_eq!(phi_tensors[0], fibers.proj, "Φ_0 must be the cohomology projection");
    let phi = Morphism::new(rep.clone(), small.clone(), phi_tensors)?;
    phi.require_valid()?;

    // degreewise cohomology comparison over the amplitude window
    let (a, b) = rep.bundle().amplitude();
    let dims_e = rep.cohomology_unchecked((a - 1, b + 1));
    let dims_h = small.cohomology_unchecked((a - 1, b + 1));
    for (de, dh) in dims_e.iter().zip(&dims_h) {
        if de != dh {
            return Err(Error::DimMismatch {
                reason: format!(
                    "cohomology of E and H(E) disagree in degree {}: {} vs {}",
                    de.0, de.1, dh.1
                ),
            });
        }
    }

    Ok(Transfer { small, phi })
}
