//! Finite groupoids: validation, nerve strings, actions, orbits and the
//! discrete Haar/cutoff data.
//!
//! A groupoid is given extensionally — objects, arrows with source/target,
//! a unit per object, an inverse per arrow and a composition table defined
//! exactly on composable pairs — so every axiom is decidable by direct scan
//! and violations carry witnesses.
//!
//! Convention for strings `(g_1, ..., g_k)`: composability means
//! `t(g_i) = s(g_{i-1})`, a string of length 0 is an object, and cochains on
//! `k`-strings take values in the fiber over `t(g_1)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Index of an object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub usize);

/// Index of an arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrId(pub usize);

/// Index of a point of a `G`-space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PtId(pub usize);

/// Raw groupoid description, as read from the interchange format.
#[derive(Clone, Debug, Default)]
pub struct GroupoidData {
    pub objects: Vec<String>,
    /// (id, src, tgt)
    pub arrows: Vec<(String, String, String)>,
    /// object -> unit arrow
    pub units: Vec<(String, String)>,
    /// arrow -> inverse arrow
    pub inverses: Vec<(String, String)>,
    /// (g, h, gh) composition triples
    pub comp: Vec<(String, String, String)>,
}

/// A validated finite groupoid.
#[derive(Debug)]
pub struct FiniteGroupoid {
    object_names: Vec<String>,
    arrow_names: Vec<String>,
    src: Vec<ObjId>,
    tgt: Vec<ObjId>,
    unit: Vec<ArrId>,
    inv: Vec<ArrId>,
    comp: Vec<Option<ArrId>>, // index g * n_arrows + h
    t_fibers: Vec<Vec<ArrId>>,
}

impl FiniteGroupoid {
    /// Validates a raw description.  On failure returns every axiom violation
    /// found, each naming the offending arrows.
    pub fn validate(data: &GroupoidData) -> std::result::Result<Arc<Self>, Vec<Error>> {
        let mut errors = Vec::new();
        let obj_index: HashMap<&str, usize> =
            data.objects.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let arr_index: HashMap<&str, usize> =
            data.arrows.iter().enumerate().map(|(i, (n, _, _))| (n.as_str(), i)).collect();
        if obj_index.len() < data.objects.len() {
            errors.push(Error::SchemaError {
                path: "groupoid.objects".into(),
                reason: "duplicate object id".into(),
            });
        }
        if arr_index.len() < data.arrows.len() {
            errors.push(Error::SchemaError {
                path: "groupoid.arrows".into(),
                reason: "duplicate arrow id".into(),
            });
        }
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for (id, s, t) in &data.arrows {
            match (obj_index.get(s.as_str()), obj_index.get(t.as_str())) {
                (Some(&a), Some(&b)) => {
                    src.push(ObjId(a));
                    tgt.push(ObjId(b));
                }
                _ => {
                    errors.push(Error::DanglingReference {
                        path: format!("groupoid.arrows.{id}"),
                        name: if obj_index.contains_key(s.as_str()) { t.clone() } else { s.clone() },
                    });
                    return Err(errors);
                }
            }
        }
        let n = data.arrows.len();
        let mut comp: Vec<Option<ArrId>> = vec![None; n * n];
        for (g, h, gh) in &data.comp {
            match (arr_index.get(g.as_str()), arr_index.get(h.as_str()), arr_index.get(gh.as_str())) {
                (Some(&a), Some(&b), Some(&c)) => comp[a * n + b] = Some(ArrId(c)),
                _ => errors.push(Error::DanglingReference {
                    path: format!("groupoid.comp.({g},{h})"),
                    name: gh.clone(),
                }),
            }
        }
        let mut unit = vec![None; data.objects.len()];
        for (x, u) in &data.units {
            match (obj_index.get(x.as_str()), arr_index.get(u.as_str())) {
                (Some(&a), Some(&b)) => unit[a] = Some(ArrId(b)),
                _ => errors.push(Error::DanglingReference {
                    path: format!("groupoid.units.{x}"),
                    name: u.clone(),
                }),
            }
        }
        let mut inv = vec![None; n];
        for (g, gi) in &data.inverses {
            match (arr_index.get(g.as_str()), arr_index.get(gi.as_str())) {
                (Some(&a), Some(&b)) => inv[a] = Some(ArrId(b)),
                _ => errors.push(Error::DanglingReference {
                    path: format!("groupoid.inverses.{g}"),
                    name: gi.clone(),
                }),
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }

        let aname = |a: ArrId| data.arrows[a.0].0.clone();
        for (x, name) in data.objects.iter().enumerate() {
            match unit[x] {
                None => errors.push(Error::BadUnit {
                    object: name.clone(),
                    reason: "no unit arrow assigned".into(),
                }),
                Some(u) => {
                    if src[u.0] != ObjId(x) || tgt[u.0] != ObjId(x) {
                        errors.push(Error::BadUnit {
                            object: name.clone(),
                            reason: format!("unit `{}` is not an endo-arrow of the object", aname(u)),
                        });
                    }
                }
            }
        }
        for g in 0..n {
            match inv[g] {
                None => errors.push(Error::BadInverse {
                    arrow: aname(ArrId(g)),
                    reason: "no inverse assigned".into(),
                }),
                Some(gi) => {
                    if src[gi.0] != tgt[g] || tgt[gi.0] != src[g] {
                        errors.push(Error::BadInverse {
                            arrow: aname(ArrId(g)),
                            reason: format!("inverse `{}` has wrong source or target", aname(gi)),
                        });
                    }
                }
            }
        }
        // comp total exactly on composable pairs
        for g in 0..n {
            for h in 0..n {
                let composable = src[g] == tgt[h];
                match comp[g * n + h] {
                    Some(gh) => {
                        if !composable {
                            errors.push(Error::SchemaError {
                                path: format!("groupoid.comp.({},{})", aname(ArrId(g)), aname(ArrId(h))),
                                reason: "entry for a non-composable pair".into(),
                            });
                        } else if src[gh.0] != src[h] || tgt[gh.0] != tgt[g] {
                            errors.push(Error::SchemaError {
                                path: format!("groupoid.comp.({},{})", aname(ArrId(g)), aname(ArrId(h))),
                                reason: format!("composite `{}` has wrong endpoints", aname(gh)),
                            });
                        }
                    }
                    None => {
                        if composable {
                            errors.push(Error::MissingComposite {
                                g: aname(ArrId(g)),
                                h: aname(ArrId(h)),
                            });
                        }
                    }
                }
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        let compose = |g: usize, h: usize| comp[g * n + h].unwrap();
        // associativity on every composable triple
        for g in 0..n {
            for h in 0..n {
                if src[g] != tgt[h] {
                    continue;
                }
                for (k, &tgt_k) in tgt.iter().enumerate() {
                    if src[h] != tgt_k {
                        continue;
                    }
                    if compose(compose(g, h).0, k) != compose(g, compose(h, k).0) {
                        errors.push(Error::NonAssociative {
                            g: aname(ArrId(g)),
                            h: aname(ArrId(h)),
                            k: aname(ArrId(k)),
                        });
                    }
                }
            }
        }
        // unit and inverse laws
        for g in 0..n {
            let lu = unit[tgt[g].0].unwrap();
            let ru = unit[src[g].0].unwrap();
            if compose(lu.0, g) != ArrId(g) || compose(g, ru.0) != ArrId(g) {
                errors.push(Error::BadUnit {
                    object: data.objects[tgt[g].0].clone(),
                    reason: format!("unit laws fail for arrow `{}`", aname(ArrId(g))),
                });
            }
            let gi = inv[g].unwrap();
            if compose(g, gi.0) != lu || compose(gi.0, g) != ru {
                errors.push(Error::BadInverse {
                    arrow: aname(ArrId(g)),
                    reason: "g g^-1 or g^-1 g is not the unit".into(),
                });
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }

        let mut t_fibers = vec![Vec::new(); data.objects.len()];
        for g in 0..n {
            t_fibers[tgt[g].0].push(ArrId(g));
        }
        Ok(Arc::new(FiniteGroupoid {
            object_names: data.objects.clone(),
            arrow_names: data.arrows.iter().map(|(id, _, _)| id.clone()).collect(),
            src,
            tgt,
            unit: unit.into_iter().map(Option::unwrap).collect(),
            inv: inv.into_iter().map(Option::unwrap).collect(),
            comp,
            t_fibers,
        }))
    }

    pub fn n_objects(&self) -> usize {
        self.object_names.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrow_names.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> {
        (0..self.n_objects()).map(ObjId)
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrId> {
        (0..self.n_arrows()).map(ArrId)
    }

    pub fn object_name(&self, x: ObjId) -> &str {
        &self.object_names[x.0]
    }

    pub fn arrow_name(&self, g: ArrId) -> &str {
        &self.arrow_names[g.0]
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.object_names.iter().position(|n| n == name).map(ObjId)
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<ArrId> {
        self.arrow_names.iter().position(|n| n == name).map(ArrId)
    }

    pub fn src(&self, g: ArrId) -> ObjId {
        self.src[g.0]
    }

    pub fn tgt(&self, g: ArrId) -> ObjId {
        self.tgt[g.0]
    }

    pub fn unit(&self, x: ObjId) -> ArrId {
        self.unit[x.0]
    }

    pub fn inv(&self, g: ArrId) -> ArrId {
        self.inv[g.0]
    }

    pub fn is_unit(&self, g: ArrId) -> bool {
        self.unit[self.src(g).0] == g && self.src(g) == self.tgt(g)
    }

    /// Composite `g h`, defined when `s(g) = t(h)`.
    pub fn compose(&self, g: ArrId, h: ArrId) -> Option<ArrId> {
        self.comp[g.0 * self.n_arrows() + h.0]
    }

    /// Arrows with target `x`.
    pub fn t_fiber(&self, x: ObjId) -> &[ArrId] {
        &self.t_fibers[x.0]
    }

    /// All factorizations `a = u v`: `u` runs over `t^{-1}(t(a))`, `v = u^{-1} a`.
    pub fn factorizations(&self, a: ArrId) -> Vec<(ArrId, ArrId)> {
        self.t_fiber(self.tgt(a))
            .iter()
            .map(|&u| (u, self.compose(self.inv(u), a).expect("t(u) = t(a)")))
            .collect()
    }

    /// All `k`-strings in lexicographic order; `k = 0` gives the objects.
    pub fn strings(&self, k: usize) -> Vec<GString> {
        if k == 0 {
            return self.objects().map(GString::object).collect();
        }
        let mut out: Vec<GString> = self
            .arrows()
            .map(|g| GString { obj: self.tgt(g), arrows: vec![g] })
            .collect();
        for _ in 1..k {
            let mut next = Vec::new();
            for s in &out {
                let last = *s.arrows.last().unwrap();
                for g in self.arrows() {
                    if self.tgt(g) == self.src(last) {
                        let mut arrows = s.arrows.clone();
                        arrows.push(g);
                        next.push(GString { obj: s.obj, arrows });
                    }
                }
            }
            out = next;
        }
        out
    }

    /// Orbit partition of the objects (connected components under arrows).
    pub fn object_orbits(&self) -> Vec<usize> {
        let mut rep: Vec<usize> = (0..self.n_objects()).collect();
        fn find(rep: &mut Vec<usize>, i: usize) -> usize {
            if rep[i] != i {
                let r = find(rep, rep[i]);
                rep[i] = r;
            }
            rep[i]
        }
        for g in self.arrows() {
            let a = find(&mut rep, self.src(g).0);
            let b = find(&mut rep, self.tgt(g).0);
            rep[a] = b;
        }
        (0..self.n_objects()).map(|i| find(&mut rep, i)).collect()
    }
}

/// A string of composable arrows; length 0 is an object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GString {
    obj: ObjId,
    arrows: Vec<ArrId>,
}

impl GString {
    pub fn object(x: ObjId) -> Self {
        GString { obj: x, arrows: Vec::new() }
    }

    /// Builds a string, checking the composability chain.
    pub fn from_arrows(g: &FiniteGroupoid, arrows: Vec<ArrId>) -> Option<Self> {
        if arrows.is_empty() {
            return None; // a 0-string needs its object
        }
        for w in arrows.windows(2) {
            if g.tgt(w[1]) != g.src(w[0]) {
                return None;
            }
        }
        Some(GString { obj: g.tgt(arrows[0]), arrows })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[ArrId] {
        &self.arrows
    }

    /// The object the string sits over: `t(g_1)`, or the object itself.
    pub fn moment(&self) -> ObjId {
        self.obj
    }

    /// `s(g_k)`, or the object itself for a 0-string.
    pub fn source(&self, g: &FiniteGroupoid) -> ObjId {
        self.arrows.last().map_or(self.obj, |&a| g.src(a))
    }

    /// Does some entry equal a unit?  Such strings are the degenerate ones.
    pub fn has_unit_entry(&self, g: &FiniteGroupoid) -> bool {
        self.arrows.iter().any(|&a| g.is_unit(a))
    }

    /// The face map `d_i`: drop first, compose `g_i g_{i+1}`, or drop last.
    pub fn face(&self, g: &FiniteGroupoid, i: usize) -> Result<GString> {
        let k = self.len();
        if k == 0 || i > k {
            return Err(Error::IndexOutOfRange { index: i, len: k });
        }
        if i == 0 {
            return Ok(if k == 1 {
                GString::object(g.src(self.arrows[0]))
            } else {
                GString { obj: g.tgt(self.arrows[1]), arrows: self.arrows[1..].to_vec() }
            });
        }
        if i == k {
            return Ok(if k == 1 {
                GString::object(g.tgt(self.arrows[0]))
            } else {
                GString { obj: self.obj, arrows: self.arrows[..k - 1].to_vec() }
            });
        }
        let mut arrows = Vec::with_capacity(k - 1);
        arrows.extend_from_slice(&self.arrows[..i - 1]);
        let composed = g
            .compose(self.arrows[i - 1], self.arrows[i])
            .expect("validated groupoid composes adjacent arrows of a string");
        arrows.push(composed);
        arrows.extend_from_slice(&self.arrows[i + 1..]);
        Ok(GString { obj: self.obj, arrows })
    }

    /// The degeneracy `s_i`: insert a unit after position `i`.
    pub fn degeneracy(&self, g: &FiniteGroupoid, i: usize) -> Result<GString> {
        let k = self.len();
        if i > k {
            return Err(Error::IndexOutOfRange { index: i, len: k });
        }
        let unit_at = if i == 0 { self.obj } else { g.src(self.arrows[i - 1]) };
        let mut arrows = Vec::with_capacity(k + 1);
        arrows.extend_from_slice(&self.arrows[..i]);
        arrows.push(g.unit(unit_at));
        arrows.extend_from_slice(&self.arrows[i..]);
        Ok(GString { obj: self.obj, arrows })
    }

    /// First `j` arrows; for `j = 0` the 0-string at the moment object.
    pub fn prefix(&self, g: &FiniteGroupoid, j: usize) -> GString {
        assert!(j <= self.len());
        if j == 0 {
            GString::object(self.obj)
        } else {
            GString::from_arrows(g, self.arrows[..j].to_vec()).unwrap()
        }
    }

    /// Arrows after position `j`; empty suffix is the 0-string at the source.
    pub fn suffix_from(&self, g: &FiniteGroupoid, j: usize) -> GString {
        assert!(j <= self.len());
        if j == self.len() {
            GString::object(self.source(g))
        } else {
            GString::from_arrows(g, self.arrows[j..].to_vec()).unwrap()
        }
    }

    /// Concatenation `self · other`, defined when `s(self) = moment(other)`.
    pub fn concat(&self, g: &FiniteGroupoid, other: &GString) -> Option<GString> {
        if self.source(g) != other.moment() {
            return None;
        }
        if self.is_empty() {
            return Some(other.clone());
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(GString { obj: self.obj, arrows })
    }

    pub fn display(&self, g: &FiniteGroupoid) -> String {
        if self.is_empty() {
            format!("[{}]", g.object_name(self.obj))
        } else {
            let names: Vec<&str> = self.arrows.iter().map(|&a| g.arrow_name(a)).collect();
            format!("({})", names.join(","))
        }
    }
}

/// A left `G`-space: points with a moment map and a partial action.
#[derive(Clone, Debug)]
pub struct GSpace {
    groupoid: Arc<FiniteGroupoid>,
    point_names: Vec<String>,
    moment: Vec<ObjId>,
    act: HashMap<(ArrId, PtId), PtId>,
}

impl GSpace {
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        point_names: Vec<String>,
        moment: Vec<ObjId>,
        act: HashMap<(ArrId, PtId), PtId>,
    ) -> Result<Self> {
        let space = GSpace { groupoid, point_names, moment, act };
        space.check()?;
        Ok(space)
    }

    fn check(&self) -> Result<()> {
        let g = &*self.groupoid;
        for p in self.points() {
            for a in g.arrows() {
                let defined = self.act.contains_key(&(a, p));
                let composable = g.src(a) == self.moment(p);
                if defined != composable {
                    return Err(Error::InvalidAction {
                        reason: format!(
                            "action of `{}` on `{}` is {}",
                            g.arrow_name(a),
                            self.point_name(p),
                            if defined { "defined but not composable" } else { "missing" }
                        ),
                    });
                }
                if composable {
                    let q = self.act[&(a, p)];
                    if self.moment(q) != g.tgt(a) {
                        return Err(Error::InvalidAction {
                            reason: format!(
                                "moment of `{}` is not t({})",
                                self.point_name(q),
                                g.arrow_name(a)
                            ),
                        });
                    }
                }
            }
            let u = g.unit(self.moment(p));
            if self.act[&(u, p)] != p {
                return Err(Error::InvalidAction {
                    reason: format!("unit does not fix `{}`", self.point_name(p)),
                });
            }
        }
        for a in g.arrows() {
            for b in g.arrows() {
                let Some(ab) = g.compose(a, b) else { continue };
                for p in self.points() {
                    if self.moment(p) != g.src(b) {
                        continue;
                    }
                    let bp = self.act[&(b, p)];
                    if self.act[&(a, bp)] != self.act[&(ab, p)] {
                        return Err(Error::InvalidAction {
                            reason: format!(
                                "(gh)p != g(hp) for g=`{}`, h=`{}`, p=`{}`",
                                g.arrow_name(a),
                                g.arrow_name(b),
                                self.point_name(p)
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn n_points(&self) -> usize {
        self.point_names.len()
    }

    pub fn points(&self) -> impl Iterator<Item = PtId> {
        (0..self.n_points()).map(PtId)
    }

    pub fn point_name(&self, p: PtId) -> &str {
        &self.point_names[p.0]
    }

    pub fn moment(&self, p: PtId) -> ObjId {
        self.moment[p.0]
    }

    pub fn act(&self, g: ArrId, p: PtId) -> Option<PtId> {
        self.act.get(&(g, p)).copied()
    }

    /// Orbit partition, quotient projection and the freeness flag.
    ///
    /// Freeness is checked literally: `(g, p) -> (p, gp)` must biject onto the
    /// fiber product `P x_B P`.
    pub fn orbits_and_quotient(&self) -> OrbitData {
        let mut rep: Vec<usize> = (0..self.n_points()).collect();
        fn find(rep: &mut Vec<usize>, i: usize) -> usize {
            if rep[i] != i {
                let r = find(rep, rep[i]);
                rep[i] = r;
            }
            rep[i]
        }
        for (&(_, p), &q) in &self.act {
            let a = find(&mut rep, p.0);
            let b = find(&mut rep, q.0);
            rep[a] = b;
        }
        let canon: Vec<usize> = (0..self.n_points()).map(|i| find(&mut rep, i)).collect();
        let mut orbit_reps: Vec<usize> = canon.clone();
        orbit_reps.sort_unstable();
        orbit_reps.dedup();
        let projection: Vec<usize> =
            canon.iter().map(|c| orbit_reps.binary_search(c).unwrap()).collect();

        // graph of (g,p) |-> (p, gp) versus the fiber product over the quotient
        let mut image: Vec<(PtId, PtId)> =
            self.act.iter().map(|(&(_, p), &q)| (p, q)).collect();
        image.sort_unstable();
        let injective = {
            let mut sorted = image.clone();
            sorted.dedup();
            sorted.len() == image.len()
        };
        let mut fiber_product = Vec::new();
        for p in self.points() {
            for q in self.points() {
                if projection[p.0] == projection[q.0] {
                    fiber_product.push((p, q));
                }
            }
        }
        image.dedup();
        let is_free = injective && image == fiber_product;
        OrbitData { n_orbits: orbit_reps.len(), projection, is_free }
    }
}

/// Result of [`GSpace::orbits_and_quotient`].
#[derive(Clone, Debug)]
pub struct OrbitData {
    pub n_orbits: usize,
    /// point index -> orbit index
    pub projection: Vec<usize>,
    pub is_free: bool,
}

/// An action groupoid `G ⋉ P` remembering where its arrows came from.
#[derive(Clone, Debug)]
pub struct ActionGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    /// arrow index -> (arrow of `G`, point acted on)
    pub parts: Vec<(ArrId, PtId)>,
    arrow_of: HashMap<(ArrId, PtId), ArrId>,
}

impl ActionGroupoid {
    /// Arrow of the action groupoid corresponding to `(g, p)`.
    pub fn arrow(&self, g: ArrId, p: PtId) -> Option<ArrId> {
        self.arrow_of.get(&(g, p)).copied()
    }
}

/// Builds the action groupoid: objects are the points of `P`, arrows are the
/// pairs `(g, p)` with `s(g) = nu(p)`, source the point, target the action,
/// and multiplication `(g, p)(h, q) = (gh, q)`.
pub fn action_groupoid(space: &GSpace) -> Result<ActionGroupoid> {
    let g = space.groupoid().clone();
    let mut parts = Vec::new();
    for a in g.arrows() {
        for p in space.points() {
            if g.src(a) == space.moment(p) {
                parts.push((a, p));
            }
        }
    }
    let arrow_of: HashMap<(ArrId, PtId), ArrId> =
        parts.iter().enumerate().map(|(i, &gp)| (gp, ArrId(i))).collect();
    let name = |&(a, p): &(ArrId, PtId)| {
        format!("({}|{})", g.arrow_name(a), space.point_name(p))
    };
    let data = GroupoidData {
        objects: space.points().map(|p| space.point_name(p).to_string()).collect(),
        arrows: parts
            .iter()
            .map(|gp| {
                let (a, p) = *gp;
                let q = space.act(a, p).expect("composable by construction");
                (name(gp), space.point_name(p).to_string(), space.point_name(q).to_string())
            })
            .collect(),
        units: space
            .points()
            .map(|p| {
                let u = g.unit(space.moment(p));
                (space.point_name(p).to_string(), name(&(u, p)))
            })
            .collect(),
        inverses: parts
            .iter()
            .map(|gp| {
                let (a, p) = *gp;
                let q = space.act(a, p).unwrap();
                (name(gp), name(&(g.inv(a), q)))
            })
            .collect(),
        comp: parts
            .iter()
            .flat_map(|&(a, p)| {
                let parts = &parts;
                let g = &g;
                let space = &space;
                parts.iter().filter_map(move |&(b, q)| {
                    // (a,p) after (b,q): composable iff p = b q
                    if space.act(b, q) != Some(p) {
                        return None;
                    }
                    let ab = g.compose(a, b)?;
                    Some((name(&(a, p)), name(&(b, q)), name(&(ab, q))))
                })
            })
            .collect(),
    };
    let groupoid = FiniteGroupoid::validate(&data).map_err(|errs| Error::InvalidAction {
        reason: format!("action groupoid fails validation: {:?}", errs.first()),
    })?;
    Ok(ActionGroupoid { groupoid, parts, arrow_of })
}

/// Discrete Haar system (counting measure, unit weights) with the orbit-wise
/// cutoff `c = 1 / |t^{-1}(x)|`.
#[derive(Clone, Debug)]
pub struct HaarCutoff<T> {
    /// weight per arrow
    pub weights: Vec<T>,
    /// cutoff value per object
    pub cutoff: Vec<T>,
}

impl<T: Scalar> HaarCutoff<T> {
    /// Builds the canonical Haar/cutoff pair; finite groupoids always admit one.
    pub fn new(g: &FiniteGroupoid) -> Self {
        let weights = vec![T::one(); g.n_arrows()];
        let cutoff = g
            .objects()
            .map(|x| T::from_int(g.t_fiber(x).len() as i64).inv())
            .collect();
        HaarCutoff { weights, cutoff }
    }

    /// Checks left invariance and the normalization identity exactly.
    pub fn verify(&self, g: &FiniteGroupoid) -> Result<()> {
        // left invariance: for every arrow a: x -> y, h |-> a h maps the
        // weights on t^{-1}(x) to the weights on t^{-1}(y)
        for a in g.arrows() {
            for &h in g.t_fiber(g.src(a)) {
                let ah = g.compose(a, h).expect("t(h) = s(a)");
                if self.weights[ah.0] != self.weights[h.0] {
                    return Err(Error::InvalidAction {
                        reason: format!(
                            "Haar weights not left invariant along `{}`",
                            g.arrow_name(a)
                        ),
                    });
                }
            }
        }
        // normalization: sum over t^{-1}(x) of c(s(h)) w(h) = 1
        for x in g.objects() {
            let mut total = T::zero();
            for &h in g.t_fiber(x) {
                total += self.cutoff[g.src(h).0].clone() * self.weights[h.0].clone();
            }
            if !total.is_one() {
                return Err(Error::InvalidAction {
                    reason: format!(
                        "cutoff normalization fails at object `{}`: sum = {}",
                        g.object_name(x),
                        total
                    ),
                });
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// standard examples
// ---------------------------------------------------------------------------

/// Unit groupoid on `n` objects: only identity arrows.
pub fn unit_groupoid(n: usize) -> Arc<FiniteGroupoid> {
    let objects: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let arrows: Vec<(String, String, String)> =
        (0..n).map(|i| (format!("id{i}"), format!("x{i}"), format!("x{i}"))).collect();
    let data = GroupoidData {
        objects,
        units: (0..n).map(|i| (format!("x{i}"), format!("id{i}"))).collect(),
        inverses: (0..n).map(|i| (format!("id{i}"), format!("id{i}"))).collect(),
        comp: (0..n).map(|i| (format!("id{i}"), format!("id{i}"), format!("id{i}"))).collect(),
        arrows,
    };
    FiniteGroupoid::validate(&data).expect("unit groupoid is valid")
}

/// The cyclic group `Z/n` as a one-object groupoid.
pub fn cyclic_group(n: usize) -> Arc<FiniteGroupoid> {
    assert!(n >= 1);
    let data = GroupoidData {
        objects: vec!["pt".into()],
        arrows: (0..n).map(|i| (format!("g{i}"), "pt".into(), "pt".into())).collect(),
        units: vec![("pt".into(), "g0".into())],
        inverses: (0..n).map(|i| (format!("g{i}"), format!("g{}", (n - i) % n))).collect(),
        comp: (0..n)
            .flat_map(|i| (0..n).map(move |j| (format!("g{i}"), format!("g{j}"), format!("g{}", (i + j) % n))))
            .collect(),
    };
    FiniteGroupoid::validate(&data).expect("cyclic group is valid")
}

/// Pair groupoid on `n` objects: exactly one arrow between any two objects.
pub fn pair_groupoid(n: usize) -> Arc<FiniteGroupoid> {
    let arrow = |i: usize, j: usize| format!("a{j}{i}"); // arrow x_i -> x_j
    let data = GroupoidData {
        objects: (0..n).map(|i| format!("x{i}")).collect(),
        arrows: (0..n)
            .flat_map(|j| (0..n).map(move |i| (arrow(i, j), format!("x{i}"), format!("x{j}"))))
            .collect(),
        units: (0..n).map(|i| (format!("x{i}"), arrow(i, i))).collect(),
        inverses: (0..n)
            .flat_map(|j| (0..n).map(move |i| (arrow(i, j), arrow(j, i))))
            .collect(),
        comp: (0..n)
            .flat_map(|k| {
                (0..n).flat_map(move |j| (0..n).map(move |i| (arrow(j, k), arrow(i, j), arrow(i, k))))
            })
            .collect(),
    };
    FiniteGroupoid::validate(&data).expect("pair groupoid is valid")
}

/// Disjoint union of two groupoids, objects and arrows relabelled.
pub fn disjoint_union(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Arc<FiniteGroupoid> {
    let tag = |side: usize, s: &str| format!("u{side}.{s}");
    let mut data = GroupoidData::default();
    for (side, g) in [a, b].into_iter().enumerate() {
        for x in g.objects() {
            data.objects.push(tag(side, g.object_name(x)));
            data.units.push((tag(side, g.object_name(x)), tag(side, g.arrow_name(g.unit(x)))));
        }
        for r in g.arrows() {
            data.arrows.push((
                tag(side, g.arrow_name(r)),
                tag(side, g.object_name(g.src(r))),
                tag(side, g.object_name(g.tgt(r))),
            ));
            data.inverses.push((tag(side, g.arrow_name(r)), tag(side, g.arrow_name(g.inv(r)))));
            for s in g.arrows() {
                if let Some(rs) = g.compose(r, s) {
                    data.comp.push((
                        tag(side, g.arrow_name(r)),
                        tag(side, g.arrow_name(s)),
                        tag(side, g.arrow_name(rs)),
                    ));
                }
            }
        }
    }
    FiniteGroupoid::validate(&data).expect("disjoint union of valid groupoids is valid")
}

/// `Z/2` acting on two points by the swap.
pub fn z2_swap_space() -> GSpace {
    let g = cyclic_group(2);
    let sigma = g.arrow_by_name("g1").unwrap();
    let e = g.arrow_by_name("g0").unwrap();
    let mut act = HashMap::new();
    act.insert((e, PtId(0)), PtId(0));
    act.insert((e, PtId(1)), PtId(1));
    act.insert((sigma, PtId(0)), PtId(1));
    act.insert((sigma, PtId(1)), PtId(0));
    GSpace::new(g, vec!["p".into(), "q".into()], vec![ObjId(0), ObjId(0)], act)
        .expect("swap action is valid")
}

/// A groupoid acting on its own objects via targets; the action groupoid is
/// canonically isomorphic to `G` itself.
pub fn base_space(g: &Arc<FiniteGroupoid>) -> GSpace {
    let mut act = HashMap::new();
    for a in g.arrows() {
        act.insert((a, PtId(g.src(a).0)), PtId(g.tgt(a).0));
    }
    GSpace::new(
        g.clone(),
        g.objects().map(|x| g.object_name(x).to_string()).collect(),
        g.objects().collect(),
        act,
    )
    .expect("base action is valid")
}
