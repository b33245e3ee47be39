//! Groupoid morphisms and the pullback of representations.

use std::sync::Arc;

use crate::cochain::{GradedBundle, Tensor};
use crate::error::{Error, Result};
use crate::groupoid::{ActionGroupoid, ArrId, FiniteGroupoid, GSpace, GString, ObjId};
use crate::rep::Rep;
use crate::scalar::Scalar;

/// A functor between finite groupoids, checked on construction.
#[derive(Clone, Debug)]
pub struct GroupoidMorphism {
    source: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
    obj_map: Vec<ObjId>,
    arr_map: Vec<ArrId>,
}

impl GroupoidMorphism {
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        obj_map: Vec<ObjId>,
        arr_map: Vec<ArrId>,
    ) -> Result<Self> {
        if obj_map.len() != source.n_objects() || arr_map.len() != source.n_arrows() {
            return Err(Error::NotAFunctor { reason: "map lengths do not match".into() });
        }
        for h in source.arrows() {
            let img = arr_map[h.0];
            if target.src(img) != obj_map[source.src(h).0]
                || target.tgt(img) != obj_map[source.tgt(h).0]
            {
                return Err(Error::NotAFunctor {
                    reason: format!("endpoints of `{}` are not preserved", source.arrow_name(h)),
                });
            }
        }
        for x in source.objects() {
            if arr_map[source.unit(x).0] != target.unit(obj_map[x.0]) {
                return Err(Error::NotAFunctor {
                    reason: format!("unit of `{}` is not preserved", source.object_name(x)),
                });
            }
        }
        for g in source.arrows() {
            for h in source.arrows() {
                if let Some(gh) = source.compose(g, h) {
                    let img = target
                        .compose(arr_map[g.0], arr_map[h.0])
                        .expect("images are composable since endpoints are preserved");
                    if img != arr_map[gh.0] {
                        return Err(Error::NotAFunctor {
                            reason: format!(
                                "composition of `{}` and `{}` is not preserved",
                                source.arrow_name(g),
                                source.arrow_name(h)
                            ),
                        });
                    }
                }
            }
        }
        Ok(GroupoidMorphism { source, target, obj_map, arr_map })
    }

    pub fn identity(g: &Arc<FiniteGroupoid>) -> Self {
        GroupoidMorphism {
            source: g.clone(),
            target: g.clone(),
            obj_map: g.objects().collect(),
            arr_map: g.arrows().collect(),
        }
    }

    pub fn source(&self) -> &Arc<FiniteGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroupoid> {
        &self.target
    }

    pub fn apply_obj(&self, x: ObjId) -> ObjId {
        self.obj_map[x.0]
    }

    pub fn apply_arr(&self, h: ArrId) -> ArrId {
        self.arr_map[h.0]
    }

    pub fn map_string(&self, s: &GString) -> GString {
        if s.is_empty() {
            GString::object(self.apply_obj(s.moment()))
        } else {
            let arrows = s.arrows().iter().map(|&a| self.apply_arr(a)).collect();
            GString::from_arrows(&self.target, arrows)
                .expect("functors preserve composability")
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupoidMorphism) -> Result<GroupoidMorphism> {
        if !Arc::ptr_eq(&other.target, &self.source) {
            return Err(Error::NotAFunctor {
                reason: "composition endpoints do not match".into(),
            });
        }
        GroupoidMorphism::new(
            other.source.clone(),
            self.target.clone(),
            other.obj_map.iter().map(|&x| self.apply_obj(x)).collect(),
            other.arr_map.iter().map(|&a| self.apply_arr(a)).collect(),
        )
    }
}

/// The projection functor `G ⋉ P -> G`, `(g, p) ↦ g`.
pub fn action_projection(ag: &ActionGroupoid, space: &GSpace) -> GroupoidMorphism {
    let obj_map = space.points().map(|p| space.moment(p)).collect();
    let arr_map = ag.parts.iter().map(|&(g, _)| g).collect();
    GroupoidMorphism::new(ag.groupoid.clone(), space.groupoid().clone(), obj_map, arr_map)
        .expect("the action projection is a functor")
}

/// Pulls a representation back along a functor:
/// `φ*(R_k)(h_1,...,h_k) = R_k(φ(h_1),...,φ(h_k))`, bundle pulled back along
/// the object map.
pub fn pullback<T: Scalar>(phi: &GroupoidMorphism, rep: &Rep<T>) -> Result<Rep<T>> {
    assert!(
        Arc::ptr_eq(phi.target(), rep.groupoid()),
        "representation must live over the functor target"
    );
    let h = phi.source().clone();
    let (a, b) = rep.bundle().amplitude();
    let dims: Vec<Vec<usize>> = h
        .objects()
        .map(|x| (a..=b).map(|l| rep.bundle().dim(phi.apply_obj(x), l)).collect())
        .collect();
    let bundle = GradedBundle::new(a, b, dims);
    let mut tensors = Vec::new();
    for t in rep.tensors() {
        let k = t.k();
        let mut pulled = Tensor::zero(k, t.shift());
        for s in h.strings(k) {
            if let Some(m) = t.get(&phi.map_string(&s)) {
                pulled.set(s, m.clone());
            }
        }
        tensors.push(pulled);
    }
    Rep::new(h, bundle, tensors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{random_strict_rep, random_unital_rep};
    use crate::groupoid::{action_groupoid, cyclic_group, pair_groupoid, unit_groupoid, z2_swap_space};
    use crate::Rational;

    /// `Z/2 -> Z/2` collapsing everything to the unit.
    pub(crate) fn collapse_z2(g: &Arc<FiniteGroupoid>) -> GroupoidMorphism {
        let unit = g.unit(ObjId(0));
        GroupoidMorphism::new(g.clone(), g.clone(), vec![ObjId(0)], vec![unit, unit]).unwrap()
    }

    #[test]
    fn identity_pullback_is_identity() {
        let g = cyclic_group(2);
        let rep: Rep<Rational> = random_unital_rep(&g, 5, (0, 2));
        let id = GroupoidMorphism::identity(&g);
        let back = pullback(&id, &rep).unwrap();
        for k in 0..=rep.max_k() {
            assert_eq!(back.r(k), rep.r(k));
        }
    }

    #[test]
    fn unit_inclusion_forgets_the_action() {
        // units of G form a unit groupoid mapping into G
        let g = pair_groupoid(2);
        let u = unit_groupoid(2);
        let obj_map: Vec<ObjId> = u.objects().collect();
        let arr_map: Vec<ArrId> = u.objects().map(|x| g.unit(x)).collect();
        let incl = GroupoidMorphism::new(u.clone(), g.clone(), obj_map, arr_map).unwrap();
        let rep: Rep<Rational> = random_strict_rep(&g, 9, (0, 1), false);
        let pulled = pullback(&incl, &rep).unwrap();
        assert!(pulled.verify_structure().is_valid());
        // pointwise data survives: the differential agrees object by object
        for x in u.objects() {
            assert_eq!(pulled.differential_at(x), rep.differential_at(x));
        }
    }

    #[test]
    fn non_functor_is_rejected() {
        let g = cyclic_group(2);
        let sigma = g.arrow_by_name("g1").unwrap();
        // σ as the image of the unit breaks unit preservation
        let err =
            GroupoidMorphism::new(g.clone(), g.clone(), vec![ObjId(0)], vec![sigma, sigma])
                .unwrap_err();
        assert!(matches!(err, Error::NotAFunctor { .. }));
    }

    #[test]
    fn pullback_along_composite_is_composite_of_pullbacks() {
        let g = cyclic_group(2);
        let collapse = collapse_z2(&g);
        let rep: Rep<Rational> = random_unital_rep(&g, 31, (0, 2));
        let once = pullback(&collapse, &rep).unwrap();
        let twice_direct = pullback(&collapse.compose(&collapse).unwrap(), &rep).unwrap();
        let twice_stepwise = pullback(&collapse, &once).unwrap();
        for k in 0..=rep.max_k() {
            assert_eq!(twice_direct.r(k), twice_stepwise.r(k));
        }
    }

    #[test]
    fn pullback_along_action_projection_restricts_entrywise() {
        let space = z2_swap_space();
        let ag = action_groupoid(&space).unwrap();
        let proj = action_projection(&ag, &space);
        let g = space.groupoid().clone();
        let rep: Rep<Rational> = random_unital_rep(&g, 77, (0, 2));
        let pulled = pullback(&proj, &rep).unwrap();
        assert!(pulled.verify_structure().is_valid());
        // entrywise: R'_k at a string of pairs equals R_k at the g-components
        for k in 0..=rep.max_k() {
            let t = rep.r(k);
            let tp = pulled.r(k);
            for s in ag.groupoid.strings(k) {
                let mapped = proj.map_string(&s);
                assert_eq!(tp.get(&s), t.get(&mapped));
            }
        }
    }
}
