//! The simplicial resolution by free actions: levels `P^(m) = G_{m+1}` with
//! the left action on the first arrow, flat maps `♭_i = d_{i+1}`, the section
//! `σ₀` inserting a unit in front, and the free-action cohomology check.
//!
//! Cochain-level maps are induced point-wise: a `k`-string of the action
//! groupoid `G^(m)` is a pair `(γ, p)` of a `k`-string of `G` and a basepoint
//! `p` with `s(γ) = ν(p)`, and a moment-preserving map of `G`-spaces acts on
//! the basepoint only.  This is what makes `σ₀^*` well defined even though
//! `σ₀` is not equivariant; equivariance of the `♭_i` is what makes the flat
//! pullbacks commute with the structure operators.

use std::collections::BTreeMap;
use std::collections::HashMap;

use crate::cochain::{BidegreeLayout, Cochain};
use crate::error::{Error, Result};
use crate::functor::{action_projection, pullback};
use crate::groupoid::{
    action_groupoid, ActionGroupoid, FiniteGroupoid, GSpace, GString, OrbitData, PtId,
};
use crate::linalg::{Matrix, Subspace};
use crate::rep::Rep;
use crate::scalar::{sign, Scalar};
use std::sync::Arc;

/// One level of the resolution.
pub struct ResolutionLevel<T> {
    pub m: usize,
    /// the free `G`-space `P^(m) = G_{m+1}`
    pub space: GSpace,
    /// the action groupoid `G^(m)`
    pub ag: ActionGroupoid,
    /// the base representation pulled back along the projection `G^(m) -> G`
    pub rep: Rep<T>,
    /// point strings of `P^(m)` in enumeration order
    pub points: Vec<GString>,
    /// `flats[i][p]` = index of `♭_i(p) = d_{i+1}(p)` one level down
    pub flats: Vec<Vec<usize>>,
    /// `sigma0[p']` = index of `σ₀(p')` for each point of the level below
    pub sigma0: Vec<usize>,
    pub quotient: OrbitData,
}

/// The tower: the base representation over `G` plus levels `0 ..= depth`.
pub struct ResolutionTower<T> {
    base: Rep<T>,
    pub levels: Vec<ResolutionLevel<T>>,
}

fn nerve_space(g: &Arc<FiniteGroupoid>, m: usize) -> (GSpace, Vec<GString>) {
    let points = g.strings(m + 1);
    let index: HashMap<GString, usize> =
        points.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut act = HashMap::new();
    for (i, s) in points.iter().enumerate() {
        for a in g.arrows() {
            if g.src(a) == s.moment() {
                let mut arrows = s.arrows().to_vec();
                arrows[0] = g.compose(a, arrows[0]).unwrap();
                let t = GString::from_arrows(g, arrows).unwrap();
                act.insert((a, PtId(i)), PtId(index[&t]));
            }
        }
    }
    let space = GSpace::new(
        g.clone(),
        points.iter().map(|s| s.display(g)).collect(),
        points.iter().map(GString::moment).collect(),
        act,
    )
    .expect("the nerve action is a valid action");
    (space, points)
}

/// Builds `P^(m)`, its action groupoid, the pulled-back coefficients, the
/// flats and the section, asserting freeness and the quotient identification
/// `π = d_0` onto `G_m`.
pub fn build_level<T: Scalar>(base: &Rep<T>, m: usize) -> ResolutionLevel<T> {
    let g = base.groupoid().clone();
    let (space, points) = nerve_space(&g, m);
    let ag = action_groupoid(&space).expect("nerve space yields a valid action groupoid");
    let proj = action_projection(&ag, &space);
    let rep = pullback(&proj, base).expect("pullback along the projection is well-shaped");

    let below: Vec<GString> = g.strings(m);
    let below_index: HashMap<GString, usize> =
        below.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut flats = Vec::new();
    for i in 0..=m {
        let map: Vec<usize> = points
            .iter()
            .map(|p| {
                let image = p.face(&g, i + 1).expect("faces of (m+1)-strings");
                below_index[&image]
            })
            .collect();
        flats.push(map);
    }
    let point_index: HashMap<GString, usize> =
        points.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let sigma0: Vec<usize> = below
        .iter()
        .map(|p| {
            let lifted = p.degeneracy(&g, 0).expect("insert unit in front");
            point_index[&lifted]
        })
        .collect();

    let quotient = space.orbits_and_quotient();
    assert!(quotient.is_free, "the nerve levels are free G-spaces");
    assert_eq!(quotient.n_orbits, below.len(), "quotient of P^(m) is G_m");
    // π = d_0: points share an orbit exactly when their d_0-faces agree
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            let same_orbit = quotient.projection[i] == quotient.projection[j];
            let same_face = p.face(&g, 0).unwrap() == q.face(&g, 0).unwrap();
            assert_eq!(same_orbit, same_face, "π must be d_0");
        }
    }

    ResolutionLevel { m, space, ag, rep, points, flats, sigma0, quotient }
}

impl<T: Scalar> ResolutionTower<T> {
    /// Builds levels `0 ..= depth` over the base representation.
    pub fn new(base: Rep<T>, depth: usize) -> Self {
        let levels = (0..=depth).map(|m| build_level(&base, m)).collect();
        ResolutionTower { base, levels }
    }

    pub fn base(&self) -> &Rep<T> {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Splits a string of `G^(m)` into its `G`-string and basepoint.
    fn decompose(&self, m: usize, s: &GString) -> (GString, usize) {
        let level = &self.levels[m];
        let g = self.base.groupoid();
        if s.is_empty() {
            let p = s.moment().0;
            return (GString::object(level.space.moment(PtId(p))), p);
        }
        let parts: Vec<_> = s.arrows().iter().map(|&a| level.ag.parts[a.0]).collect();
        let arrows: Vec<_> = parts.iter().map(|&(a, _)| a).collect();
        let base_point = parts.last().unwrap().1 .0;
        (GString::from_arrows(g, arrows).unwrap(), base_point)
    }

    /// Rebuilds the `G^(m)`-string with a new basepoint.
    fn recompose(&self, m: usize, gamma: &GString, point: usize) -> GString {
        let level = &self.levels[m];
        if gamma.is_empty() {
            return GString::object(crate::groupoid::ObjId(point));
        }
        let arrows = gamma.arrows();
        let mut pts = vec![PtId(point)];
        for i in (1..arrows.len()).rev() {
            let prev = *pts.last().unwrap();
            pts.push(level.space.act(arrows[i], prev).expect("composable"));
        }
        pts.reverse();
        let ag_arrows: Vec<_> = arrows
            .iter()
            .zip(&pts)
            .map(|(&a, &p)| level.ag.arrow(a, p).expect("arrow exists"))
            .collect();
        GString::from_arrows(&level.ag.groupoid, ag_arrows).unwrap()
    }

    fn layout(&self, m: isize, k: usize, l: i64) -> BidegreeLayout {
        if m < 0 {
            BidegreeLayout::new(self.base.groupoid(), self.base.bundle(), k, l)
        } else {
            let level = &self.levels[m as usize];
            BidegreeLayout::new(&level.ag.groupoid, level.rep.bundle(), k, l)
        }
    }

    /// Matrix of a point-map pullback `C^k(level m-1) -> C^k(level m)`.
    fn point_map_matrix(
        &self,
        m: usize,
        k: usize,
        l: i64,
        map_point: &dyn Fn(usize) -> Option<usize>,
    ) -> Matrix<T> {
        let from = self.layout(m as isize - 1, k, l);
        let to = self.layout(m as isize, k, l);
        let mut out = Matrix::zero(to.dim, from.dim);
        for (row_s_idx, s) in to.strings.iter().enumerate() {
            let fiber = to.fiber_dim(row_s_idx);
            if fiber == 0 {
                continue;
            }
            let (gamma, p) = self.decompose(m, s);
            let target = if m == 0 {
                // level -1 strings are plain G-strings
                gamma.clone()
            } else {
                match map_point(p) {
                    Some(q) => self.recompose(m - 1, &gamma, q),
                    None => continue,
                }
            };
            for f in 0..fiber {
                let row = to.position(s, f).unwrap();
                if let Some(col) = from.position(&target, f) {
                    out.set(row, col, T::one());
                }
            }
        }
        out
    }

    /// `♭_i^*: C^k(G^(m-1); E^l) -> C^k(G^(m); E^l)` (level `-1` is `C(G;E)`).
    pub fn flat_matrix(&self, m: usize, i: usize, k: usize, l: i64) -> Matrix<T> {
        let flats = self.levels[m].flats[i].clone();
        self.point_map_matrix(m, k, l, &move |p| Some(flats[p]))
    }

    /// `♭^* = Σ_i (-1)^i ♭_i^*`.
    pub fn flat_sum_matrix(&self, m: usize, k: usize, l: i64) -> Matrix<T> {
        let mut out = Matrix::zero(self.layout(m as isize, k, l).dim, self.layout(m as isize - 1, k, l).dim);
        for i in 0..=m {
            out = out.add(&self.flat_matrix(m, i, k, l).scale(&sign::<T>(i as i64)));
        }
        out
    }

    /// `σ₀^*: C^k(G^(m); E^l) -> C^k(G^(m-1); E^l)` — transpose direction of
    /// the flats, induced by the (non-equivariant) unit-inserting section.
    pub fn sigma_matrix(&self, m: usize, k: usize, l: i64) -> Matrix<T> {
        let from = self.layout(m as isize, k, l);
        let to = self.layout(m as isize - 1, k, l);
        let sigma0 = &self.levels[m].sigma0;
        let g = self.base.groupoid();
        let mut out = Matrix::zero(to.dim, from.dim);
        for (row_s_idx, s) in to.strings.iter().enumerate() {
            let fiber = to.fiber_dim(row_s_idx);
            if fiber == 0 {
                continue;
            }
            let (gamma, p) = if m == 0 {
                // level -1: plain G-string; its basepoint is the source object
                (s.clone(), s.source(g).0)
            } else {
                self.decompose(m - 1, s)
            };
            let lifted = self.recompose(m, &gamma, sigma0[p]);
            for f in 0..fiber {
                let row = to.position(s, f).unwrap();
                if let Some(col) = from.position(&lifted, f) {
                    out.set(row, col, T::one());
                }
            }
        }
        out
    }

    /// Total-degree block matrix of a bidegree-preserving map family.
    fn total_matrix(
        &self,
        m: usize,
        n: i64,
        per_bidegree: &dyn Fn(usize, i64) -> Matrix<T>,
    ) -> Matrix<T> {
        let from_layout = if m == 0 { self.base.layout(n) } else { self.levels[m - 1].rep.layout(n) };
        let to_layout = self.levels[m].rep.layout(n);
        let mut out = Matrix::zero(to_layout.dim, from_layout.dim);
        let mut col_off = 0;
        for comp in &from_layout.comps {
            let block = per_bidegree(comp.k, comp.l);
            let (_, row_off) = to_layout.component(comp.k).expect("same bidegree exists");
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    let v = block.get(r, c);
                    if !v.is_zero() {
                        out.set(row_off + r, col_off + c, v);
                    }
                }
            }
            col_off += comp.dim;
        }
        out
    }

    /// Exact commutation `D ∘ ♭_i^* = ♭_i^* ∘ D` in total degree `n`.
    pub fn flat_commutes_with_d(&self, m: usize, i: usize, n: i64) -> bool {
        let below_d = if m == 0 {
            self.base.structure_matrix(n)
        } else {
            self.levels[m - 1].rep.structure_matrix(n)
        };
        let here_d = self.levels[m].rep.structure_matrix(n);
        let f_n = self.total_matrix(m, n, &|k, l| self.flat_matrix(m, i, k, l));
        let f_n1 = self.total_matrix(m, n + 1, &|k, l| self.flat_matrix(m, i, k, l));
        here_d.mul(&f_n) == f_n1.mul(&below_d)
    }

    /// `σ₀^* ♭_i^* = Id` for `i = 0` and `♭_{i-1}^* σ₀^*` for `i > 0`.
    pub fn sigma_flat_identities(&self, m: usize, k: usize, l: i64) -> bool {
        for i in 0..=m {
            let lhs = self.sigma_matrix(m, k, l).mul(&self.flat_matrix(m, i, k, l));
            let rhs = if i == 0 {
                Matrix::identity(self.layout(m as isize - 1, k, l).dim)
            } else if m >= 1 {
                self.flat_matrix(m - 1, i - 1, k, l).mul(&self.sigma_matrix(m - 1, k, l))
            } else {
                continue;
            };
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// The homotopy identity `σ₀^* ♭^* + ♭^* σ₀^* = Id` on level `m - 1`.
    pub fn homotopy_identity(&self, m: usize, k: usize, l: i64) -> bool {
        let dim = self.layout(m as isize - 1, k, l).dim;
        let mut sum = self.sigma_matrix(m, k, l).mul(&self.flat_sum_matrix(m, k, l));
        if m >= 1 {
            sum = sum.add(&self.flat_sum_matrix(m - 1, k, l).mul(&self.sigma_matrix(m - 1, k, l)));
        }
        sum == Matrix::identity(dim)
    }

    /// `(♭^*)² = 0` from level `m - 1` through level `m + 1`.
    pub fn flat_squares_to_zero(&self, m: usize, k: usize, l: i64) -> bool {
        self.flat_sum_matrix(m + 1, k, l)
            .mul(&self.flat_sum_matrix(m, k, l))
            .is_zero()
    }

    /// Exactness of the co-augmented row at one bidegree, by rank: the
    /// kernel of the outgoing `♭^*` equals the image of the incoming one at
    /// every level `0 ..= depth - 1`.
    pub fn row_exactness(&self, k: usize, l: i64) -> bool {
        for m in 0..self.depth() {
            let into = self.flat_sum_matrix(m, k, l);
            let out = self.flat_sum_matrix(m + 1, k, l);
            let dim = self.layout(m as isize, k, l).dim;
            let kernel = dim - out.rank();
            if kernel != into.rank() {
                return false;
            }
        }
        // injectivity at the augmentation
        let aug = self.flat_sum_matrix(0, k, l);
        aug.rank() == self.layout(-1, k, l).dim
    }

    /// Invariant-section spaces `W_m = H^{a}` of the level complexes, for an
    /// ordinary (single-degree) base representation: the vertical edge of the
    /// double complex.
    fn invariant_sections(&self, m: isize) -> Subspace<T> {
        let (a, b) = self.base.bundle().amplitude();
        assert_eq!(a, b, "invariant sections need an ordinary representation");
        let d = if m < 0 {
            self.base.structure_matrix(a)
        } else {
            self.levels[m as usize].rep.structure_matrix(a)
        };
        d.kernel_basis()
    }

    /// Dimensions of the horizontal-edge cohomology `H^m(W_•)` for `m` up to
    /// `depth - 1`, for an ordinary base representation.
    pub fn horizontal_edge_cohomology(&self) -> Vec<usize> {
        let (a, _) = self.base.bundle().amplitude();
        let w: Vec<Subspace<T>> = (0..=self.depth() as isize).map(|m| self.invariant_sections(m)).collect();
        // matrices of ♭^* restricted to the W-spaces
        let mut maps: Vec<Matrix<T>> = Vec::new();
        for m in 1..=self.depth() {
            let flat = self.flat_sum_matrix(m, 0, a);
            let from = &w[m - 1];
            let to = &w[m];
            let mut matrix = Matrix::zero(to.dim(), from.dim());
            for (col, v) in from.basis_vectors().iter().enumerate() {
                let image = flat.mul_vec(v);
                let coords = to
                    .coords(&image)
                    .expect("♭^* commutes with D, so it preserves invariants");
                for (row, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        matrix.set(row, col, c);
                    }
                }
            }
            maps.push(matrix);
        }
        let mut out = Vec::new();
        for m in 0..self.depth() {
            let kernel = w[m].dim() - maps[m].rank();
            let image = if m == 0 { 0 } else { maps[m - 1].rank() };
            out.push(kernel - image);
        }
        out
    }

    /// The per-level, per-total-degree dimension grid of the co-augmented
    /// double complex (level `-1` first).
    pub fn dimension_grid(&self, window: (i64, i64)) -> BTreeMap<(isize, i64), usize> {
        let mut grid = BTreeMap::new();
        for n in window.0..=window.1 {
            grid.insert((-1, n), self.base.layout(n).dim);
            for (m, level) in self.levels.iter().enumerate() {
                grid.insert((m as isize, n), level.rep.layout(n).dim);
            }
        }
        grid
    }
}

/// Outcome of the free-action cohomology check.
#[derive(Debug)]
pub struct BanalReport {
    pub h_dims: Vec<(i64, usize)>,
    pub expected_h0: usize,
    pub ok: bool,
}

/// For a free `G`-space `P` and an ordinary fiber family `F` on the quotient
/// `B` (given by one dimension per orbit), checks that the action groupoid
/// with coefficients `π^* F` has `H^0` of dimension `Σ_b dim F_b` and
/// `H^{p>0} = 0` in the window.
pub fn banal_check<T: Scalar>(
    space: &GSpace,
    f_dims: &[usize],
    top_degree: i64,
) -> Result<BanalReport> {
    let data = space.orbits_and_quotient();
    if !data.is_free {
        // witness: a point with a nontrivial stabilizer
        let g = space.groupoid();
        let witness = space
            .points()
            .find(|&p| {
                g.arrows().any(|a| {
                    !g.is_unit(a) && space.act(a, p) == Some(p)
                })
            })
            .map(|p| space.point_name(p).to_string())
            .unwrap_or_else(|| "<fiber-product mismatch>".into());
        return Err(Error::NotFree { point: witness });
    }
    assert_eq!(f_dims.len(), data.n_orbits, "one fiber dimension per orbit");
    let ag = action_groupoid(space)?;
    let dims: Vec<Vec<usize>> =
        space.points().map(|p| vec![f_dims[data.projection[p.0]]]).collect();
    let bundle = crate::cochain::GradedBundle::new(0, 0, dims);
    let mut lambda: crate::cochain::Tensor<T> = crate::cochain::Tensor::zero(1, 0);
    for (idx, &(_, p)) in ag.parts.iter().enumerate() {
        let d = f_dims[data.projection[p.0]];
        if d == 0 {
            continue;
        }
        let mut m = crate::cochain::GradedMap::zero(0);
        m.set_block(0, Matrix::identity(d));
        lambda.set(
            GString::from_arrows(&ag.groupoid, vec![crate::groupoid::ArrId(idx)]).unwrap(),
            m,
        );
    }
    let rep = Rep::new(ag.groupoid.clone(), bundle, vec![lambda])?;
    let h_dims = rep.cohomology(( 0, top_degree))?;
    let expected_h0: usize = f_dims.iter().sum();
    let ok = h_dims
        .iter()
        .all(|&(n, d)| if n == 0 { d == expected_h0 } else { d == 0 });
    Ok(BanalReport { h_dims, expected_h0, ok })
}

/// Cochain-level flat pullback of a single cochain (used by tests that want
/// the map itself rather than its matrix).
pub fn flat_pullback_cochain<T: Scalar>(
    tower: &ResolutionTower<T>,
    m: usize,
    i: usize,
    eta: &Cochain<T>,
) -> Cochain<T> {
    let matrix = tower.flat_matrix(m, i, eta.k(), eta.l());
    let from = tower.layout(m as isize - 1, eta.k(), eta.l());
    let to = tower.layout(m as isize, eta.k(), eta.l());
    let v = from.to_vec(eta);
    to.to_cochain(&matrix.mul_vec(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::random_strict_rep;
    use crate::groupoid::{cyclic_group, pair_groupoid};
    use crate::Rational;

    #[test]
    fn level_zero_of_z2() {
        let g = cyclic_group(2);
        let base: Rep<Rational> = Rep::trivial(g);
        let level = build_level(&base, 0);
        // P^(0) = G_1 with quotient M via π = d_0 = s
        assert_eq!(level.space.n_points(), 2);
        assert_eq!(level.quotient.n_orbits, 1);
        assert!(level.quotient.is_free);
    }

    #[test]
    fn level_one_of_z2_counts() {
        let g = cyclic_group(2);
        let base: Rep<Rational> = Rep::trivial(g);
        let level = build_level(&base, 1);
        assert_eq!(level.space.n_points(), 4); // |G_2| = 4
        assert_eq!(level.quotient.n_orbits, 2); // B = G_1
    }

    #[test]
    fn level_zero_of_pair_groupoid_counts() {
        let g = pair_groupoid(2);
        let base: Rep<Rational> = Rep::trivial(g);
        let level = build_level(&base, 0);
        assert_eq!(level.space.n_points(), 4); // |G_1| = 4
        assert_eq!(level.quotient.n_orbits, 2); // B = M
    }

    #[test]
    fn simplicial_identities_for_sigma_and_flats() {
        let g = cyclic_group(2);
        let base: Rep<Rational> = Rep::trivial(g);
        let tower = ResolutionTower::new(base, 2);
        for m in 0..=2usize {
            for k in 0..=2usize {
                assert!(tower.sigma_flat_identities(m, k, 0), "m={m}, k={k}");
            }
        }
    }

    #[test]
    fn homotopy_identity_and_flat_square() {
        for g in [cyclic_group(2), pair_groupoid(2)] {
            let base: Rep<Rational> = Rep::trivial(g);
            let tower = ResolutionTower::new(base, 2);
            for m in 0..=2usize {
                for k in 0..=2usize {
                    assert!(tower.homotopy_identity(m, k, 0), "homotopy at m={m}, k={k}");
                }
            }
            for m in 0..=1usize {
                for k in 0..=2usize {
                    assert!(tower.flat_squares_to_zero(m, k, 0), "square at m={m}, k={k}");
                }
            }
        }
    }

    #[test]
    fn flats_commute_with_structure_operators() {
        let g = cyclic_group(2);
        let base: Rep<Rational> = random_strict_rep(&g, 41, (0, 1), false);
        let tower = ResolutionTower::new(base, 1);
        for m in 0..=1usize {
            for i in 0..=m {
                for n in 0..=2i64 {
                    assert!(tower.flat_commutes_with_d(m, i, n), "m={m}, i={i}, n={n}");
                }
            }
        }
    }

    #[test]
    fn row_exactness_by_rank() {
        for g in [cyclic_group(2), pair_groupoid(2)] {
            let base: Rep<Rational> = Rep::trivial(g);
            let tower = ResolutionTower::new(base, 2);
            for k in 0..=2usize {
                assert!(tower.row_exactness(k, 0), "bidegree ({k},0)");
            }
        }
    }

    #[test]
    fn horizontal_edge_matches_base_cohomology() {
        for g in [cyclic_group(2), pair_groupoid(2)] {
            let base: Rep<Rational> = Rep::trivial(g.clone());
            let tower = ResolutionTower::new(base.clone(), 2);
            let horizontal = tower.horizontal_edge_cohomology();
            let vertical = base.cohomology_unchecked((0, horizontal.len() as i64 - 1));
            for (m, &h) in horizontal.iter().enumerate() {
                assert_eq!(h, vertical[m].1, "H^{m} of the W-complex");
            }
        }
    }

    #[test]
    fn banal_check_on_the_swap_action() {
        // Z/2 on 2-point swap, F = line on the single orbit
        let space = crate::groupoid::z2_swap_space();
        let report = banal_check::<Rational>(&space, &[1], 3).unwrap();
        assert!(report.ok);
        assert_eq!(report.expected_h0, 1);
    }

    #[test]
    fn banal_check_on_level_zero() {
        // P^(0) = G_1 for the pair groupoid: B = M, F = line gives H^0 = |M|
        let g = pair_groupoid(2);
        let base: Rep<Rational> = Rep::trivial(g);
        let level = build_level(&base, 0);
        let f = vec![1; level.quotient.n_orbits];
        let report = banal_check::<Rational>(&level.space, &f, 3).unwrap();
        assert!(report.ok);
        assert_eq!(report.expected_h0, 2);
    }

    #[test]
    fn non_free_action_is_rejected() {
        let g = cyclic_group(2);
        let mut act = std::collections::HashMap::new();
        for a in g.arrows() {
            act.insert((a, PtId(0)), PtId(0));
        }
        let space = GSpace::new(g, vec!["p".into()], vec![crate::groupoid::ObjId(0)], act).unwrap();
        let err = banal_check::<Rational>(&space, &[1], 2).unwrap_err();
        assert_eq!(err, Error::NotFree { point: "p".into() });
    }

    #[test]
    fn banal_agrees_with_vanishing_on_the_action_groupoid() {
        // cross-module consistency: the π^*F representation is ordinary and
        // unital, so vanishing_check must also report H = 0 outside degree 0
        let space = crate::groupoid::z2_swap_space();
        let data = space.orbits_and_quotient();
        let ag = action_groupoid(&space).unwrap();
        let dims: Vec<Vec<usize>> = space.points().map(|p| vec![[1][data.projection[p.0]]]).collect();
        let bundle = crate::cochain::GradedBundle::new(0, 0, dims);
        let mut lambda: crate::cochain::Tensor<Rational> = crate::cochain::Tensor::zero(1, 0);
        for (idx, _) in ag.parts.iter().enumerate() {
            let mut m = crate::cochain::GradedMap::zero(0);
            m.set_block(0, Matrix::identity(1));
            lambda.set(
                GString::from_arrows(&ag.groupoid, vec![crate::groupoid::ArrId(idx)]).unwrap(),
                m,
            );
        }
        let rep = Rep::new(ag.groupoid.clone(), bundle, vec![lambda]).unwrap();
        let vr = crate::spectral::vanishing_check(&rep, (0, 3)).unwrap();
        assert!(vr.vanishing_ok);
        let br = banal_check::<Rational>(&space, &[1], 3).unwrap();
        assert!(br.ok);
        assert_eq!(br.h_dims[0].1, 1);
    }
}
