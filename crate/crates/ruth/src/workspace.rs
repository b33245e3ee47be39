//! Workspace: a parsed interchange document with every cross-reference
//! resolved, plus the command layer shared by the CLI and the test suite.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::str::FromStr;
use std::sync::Arc;

use crate::cochain::GradedBundle;
use crate::error::Error;
use crate::format::{
    bundle_from_raw, bundle_to_raw, entries_from_tensors, groupoid_data_from_raw,
    groupoid_to_raw, tensors_from_entries, Document, RawFunctor, RawGSpace, RawMorphism, RawRep,
    RawTask, SCHEMA_VERSION,
};
use crate::functor::GroupoidMorphism;
use crate::groupoid::{FiniteGroupoid, GSpace, HaarCutoff, PtId};
use crate::morphism::{HomComplex, Morphism};
use crate::rep::Rep;
use crate::report::Report;
use crate::{Rational, RationalMorphism, RationalRep};

/// Commands exposed by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Cohomology,
    Pages,
    E2,
    Dual,
    Cone,
    Pullback,
    Transfer,
    Invert,
    Vanish,
    Resolve,
    Banal,
    Hom,
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "validate" => Command::Validate,
            "cohomology" => Command::Cohomology,
            "pages" => Command::Pages,
            "e2" => Command::E2,
            "dual" => Command::Dual,
            "cone" => Command::Cone,
            "pullback" => Command::Pullback,
            "transfer" => Command::Transfer,
            "invert" => Command::Invert,
            "vanish" => Command::Vanish,
            "resolve" => Command::Resolve,
            "banal" => Command::Banal,
            "hom" => Command::Hom,
            other => {
                return Err(Error::SchemaError {
                    path: "command".into(),
                    reason: format!("unknown command `{other}`"),
                })
            }
        })
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Cohomology => "cohomology",
            Command::Pages => "pages",
            Command::E2 => "e2",
            Command::Dual => "dual",
            Command::Cone => "cone",
            Command::Pullback => "pullback",
            Command::Transfer => "transfer",
            Command::Invert => "invert",
            Command::Vanish => "vanish",
            Command::Resolve => "resolve",
            Command::Banal => "banal",
            Command::Hom => "hom",
        }
    }
}

/// Per-invocation options (flags or task fields).
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub rep: Option<String>,
    pub target: Option<String>,
    pub morphism: Option<String>,
    pub functor: Option<String>,
    pub gspace: Option<String>,
    pub degrees: Option<(i64, i64)>,
    pub pages: Option<i64>,
    pub levels: Option<usize>,
    pub fiber_dims: Option<Vec<usize>>,
    pub threads: usize,
}

impl RunOptions {
    pub fn from_task(task: &RawTask) -> Self {
        RunOptions {
            rep: task.rep.clone(),
            target: task.target.clone(),
            morphism: task.morphism.clone(),
            functor: task.functor.clone(),
            gspace: task.gspace.clone(),
            degrees: task.degrees.map(|[a, b]| (a, b)),
            pages: task.pages,
            levels: task.levels,
            fiber_dims: task.fiber_dims.clone(),
            threads: 1,
        }
    }
}

/// A fully resolved workspace.
#[derive(Debug)]
pub struct Workspace {
    pub main: Arc<FiniteGroupoid>,
    pub groupoids: BTreeMap<String, Arc<FiniteGroupoid>>,
    pub bundles: BTreeMap<String, GradedBundle>,
    pub reps: BTreeMap<String, RationalRep>,
    rep_bundles: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, RationalMorphism>,
    morphism_ends: BTreeMap<String, (String, String)>,
    pub functors: BTreeMap<String, GroupoidMorphism>,
    functor_raw: BTreeMap<String, RawFunctor>,
    pub gspaces: BTreeMap<String, GSpace>,
    pub tasks: Vec<RawTask>,
}

impl Workspace {
    pub fn parse_str(text: &str) -> Result<Workspace, Error> {
        let doc: Document = serde_json::from_str(text).map_err(|e| Error::SchemaError {
            path: "$".into(),
            reason: e.to_string(),
        })?;
        Workspace::from_document(&doc)
    }

    pub fn from_document(doc: &Document) -> Result<Workspace, Error> {
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaError {
                path: "schema_version".into(),
                reason: format!("expected {SCHEMA_VERSION}, found {}", doc.schema_version),
            });
        }
        let main = FiniteGroupoid::validate(&groupoid_data_from_raw(&doc.groupoid))
            .map_err(|errs| Error::AxiomViolation(errs.into_iter().map(Box::new).collect()))?;
        let mut groupoids = BTreeMap::new();
        groupoids.insert("main".to_string(), main.clone());
        for (name, raw) in &doc.groupoids {
            if name == "main" {
                return Err(Error::SchemaError {
                    path: "groupoids.main".into(),
                    reason: "`main` names the primary groupoid".into(),
                });
            }
            let g = FiniteGroupoid::validate(&groupoid_data_from_raw(raw))
                .map_err(|errs| Error::AxiomViolation(errs.into_iter().map(Box::new).collect()))?;
            groupoids.insert(name.clone(), g);
        }

        let mut bundles = BTreeMap::new();
        for (name, raw) in &doc.bundle {
            bundles.insert(name.clone(), bundle_from_raw(&main, raw, &format!("bundle.{name}"))?);
        }

        let mut reps = BTreeMap::new();
        let mut rep_bundles = BTreeMap::new();
        for (name, raw) in &doc.rep {
            let bundle = bundles.get(&raw.bundle).ok_or_else(|| Error::DanglingReference {
                path: format!("rep.{name}.bundle"),
                name: raw.bundle.clone(),
            })?;
            let tensors = tensors_from_entries(
                &main,
                &raw.tensors,
                &|k| 1 - k as i64,
                &format!("rep.{name}"),
            )?;
            let rep = Rep::new(main.clone(), bundle.clone(), tensors)?;
            reps.insert(name.clone(), rep);
            rep_bundles.insert(name.clone(), raw.bundle.clone());
        }

        let mut morphisms = BTreeMap::new();
        let mut morphism_ends = BTreeMap::new();
        for (name, raw) in &doc.morphism {
            let source = reps.get(&raw.source).ok_or_else(|| Error::DanglingReference {
                path: format!("morphism.{name}.source"),
                name: raw.source.clone(),
            })?;
            let target = reps.get(&raw.target).ok_or_else(|| Error::DanglingReference {
                path: format!("morphism.{name}.target"),
                name: raw.target.clone(),
            })?;
            let tensors = tensors_from_entries(
                &main,
                &raw.tensors,
                &|k| -(k as i64),
                &format!("morphism.{name}"),
            )?;
            morphisms.insert(name.clone(), Morphism::new(source.clone(), target.clone(), tensors)?);
            morphism_ends.insert(name.clone(), (raw.source.clone(), raw.target.clone()));
        }

        let mut functors = BTreeMap::new();
        for (name, raw) in &doc.functor {
            let source = groupoids.get(&raw.source).ok_or_else(|| Error::DanglingReference {
                path: format!("functor.{name}.source"),
                name: raw.source.clone(),
            })?;
            let target = groupoids.get(&raw.target).ok_or_else(|| Error::DanglingReference {
                path: format!("functor.{name}.target"),
                name: raw.target.clone(),
            })?;
            let mut obj_map = Vec::new();
            for x in source.objects() {
                let from = source.object_name(x);
                let to = raw.objects.get(from).ok_or_else(|| Error::SchemaError {
                    path: format!("functor.{name}.objects"),
                    reason: format!("missing image of object `{from}`"),
                })?;
                obj_map.push(target.object_by_name(to).ok_or_else(|| Error::DanglingReference {
                    path: format!("functor.{name}.objects.{from}"),
                    name: to.clone(),
                })?);
            }
            let mut arr_map = Vec::new();
            for a in source.arrows() {
                let from = source.arrow_name(a);
                let to = raw.arrows.get(from).ok_or_else(|| Error::SchemaError {
                    path: format!("functor.{name}.arrows"),
                    reason: format!("missing image of arrow `{from}`"),
                })?;
                arr_map.push(target.arrow_by_name(to).ok_or_else(|| Error::DanglingReference {
                    path: format!("functor.{name}.arrows.{from}"),
                    name: to.clone(),
                })?);
            }
            functors.insert(
                name.clone(),
                GroupoidMorphism::new(source.clone(), target.clone(), obj_map, arr_map)?,
            );
        }

        let mut gspaces = BTreeMap::new();
        for (name, raw) in &doc.gspace {
            let mut moment = Vec::new();
            for p in &raw.points {
                let obj = raw.moment.get(p).ok_or_else(|| Error::SchemaError {
                    path: format!("gspace.{name}.moment"),
                    reason: format!("missing moment of point `{p}`"),
                })?;
                moment.push(main.object_by_name(obj).ok_or_else(|| Error::DanglingReference {
                    path: format!("gspace.{name}.moment.{p}"),
                    name: obj.clone(),
                })?);
            }
            let point_index: HashMap<&str, usize> =
                raw.points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
            let mut act = HashMap::new();
            for [arrow, point, image] in &raw.action {
                let a = main.arrow_by_name(arrow).ok_or_else(|| Error::DanglingReference {
                    path: format!("gspace.{name}.action"),
                    name: arrow.clone(),
                })?;
                let p = *point_index.get(point.as_str()).ok_or_else(|| {
                    Error::DanglingReference {
                        path: format!("gspace.{name}.action"),
                        name: point.clone(),
                    }
                })?;
                let q = *point_index.get(image.as_str()).ok_or_else(|| {
                    Error::DanglingReference {
                        path: format!("gspace.{name}.action"),
                        name: image.clone(),
                    }
                })?;
                act.insert((a, PtId(p)), PtId(q));
            }
            gspaces.insert(
                name.clone(),
                GSpace::new(main.clone(), raw.points.clone(), moment, act)?,
            );
        }

        Ok(Workspace {
            main,
            groupoids,
            bundles,
            reps,
            rep_bundles,
            morphisms,
            morphism_ends,
            functors,
            functor_raw: doc.functor.clone(),
            gspaces,
            tasks: doc.tasks.clone(),
        })
    }

    /// Canonical serialization: `parse ∘ serialize` is the identity on
    /// workspaces and `serialize ∘ parse` is idempotent on documents.
    pub fn to_document(&self) -> Document {
        let main = &*self.main;
        Document {
            schema_version: SCHEMA_VERSION,
            groupoid: groupoid_to_raw(main),
            groupoids: self
                .groupoids
                .iter()
                .filter(|(name, _)| name.as_str() != "main")
                .map(|(name, g)| (name.clone(), groupoid_to_raw(g)))
                .collect(),
            bundle: self
                .bundles
                .iter()
                .map(|(name, b)| (name.clone(), bundle_to_raw(main, b)))
                .collect(),
            rep: self
                .reps
                .iter()
                .map(|(name, rep)| {
                    (
                        name.clone(),
                        RawRep {
                            bundle: self.rep_bundles[name].clone(),
                            tensors: entries_from_tensors(main, rep.tensors()),
                        },
                    )
                })
                .collect(),
            morphism: self
                .morphisms
                .iter()
                .map(|(name, m)| {
                    let (source, target) = self.morphism_ends[name].clone();
                    (
                        name.clone(),
                        RawMorphism {
                            source,
                            target,
                            tensors: entries_from_tensors(main, m.tensors()),
                        },
                    )
                })
                .collect(),
            functor: self.functor_raw.clone(),
            gspace: self
                .gspaces
                .iter()
                .map(|(name, space)| {
                    let g = space.groupoid();
                    let mut action = Vec::new();
                    for p in space.points() {
                        for a in g.arrows() {
                            if let Some(q) = space.act(a, p) {
                                action.push([
                                    g.arrow_name(a).to_string(),
                                    space.point_name(p).to_string(),
                                    space.point_name(q).to_string(),
                                ]);
                            }
                        }
                    }
                    action.sort();
                    (
                        name.clone(),
                        RawGSpace {
                            points: space.points().map(|p| space.point_name(p).to_string()).collect(),
                            moment: space
                                .points()
                                .map(|p| {
                                    (
                                        space.point_name(p).to_string(),
                                        g.object_name(space.moment(p)).to_string(),
                                    )
                                })
                                .collect(),
                            action,
                        },
                    )
                })
                .collect(),
            tasks: self.tasks.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("documents serialize")
    }

    fn pick<'a, V>(
        map: &'a BTreeMap<String, V>,
        chosen: &Option<String>,
        kind: &str,
    ) -> Result<(&'a str, &'a V), Error> {
        match chosen {
            Some(name) => map
                .get_key_value(name.as_str())
                .map(|(k, v)| (k.as_str(), v))
                .ok_or_else(|| Error::DanglingReference {
                    path: format!("--{kind}"),
                    name: name.clone(),
                }),
            None => {
                if map.len() == 1 {
                    let (k, v) = map.iter().next().unwrap();
                    Ok((k.as_str(), v))
                } else {
                    Err(Error::SchemaError {
                        path: format!("--{kind}"),
                        reason: format!(
                            "workspace has {} {kind} entries; select one by name",
                            map.len()
                        ),
                    })
                }
            }
        }
    }

    fn window(&self, rep: &RationalRep, opts: &RunOptions) -> (i64, i64) {
        opts.degrees.unwrap_or_else(|| {
            let (a, b) = rep.bundle().amplitude();
            ((-2).min(a - 1), b + 3)
        })
    }

    /// Executes one command against the workspace.
    pub fn run(&self, cmd: Command, opts: &RunOptions) -> Result<Report, Error> {
        let mut report = Report::new(cmd.name());
        match cmd {
            Command::Validate => {
                report.assert(
                    "groupoid axioms",
                    true,
                    format!(
                        "{} objects, {} arrows",
                        self.main.n_objects(),
                        self.main.n_arrows()
                    ),
                );
                let hc: HaarCutoff<Rational> = HaarCutoff::new(&self.main);
                report.assert("haar normalization", hc.verify(&self.main).is_ok(), "");
                for (name, rep) in &self.reps {
                    let r = rep.verify_structure();
                    report.assert(
                        &format!("structure equations: rep `{name}`"),
                        r.is_valid(),
                        format!("{} residual entries; D^2 = 0: {}", r.violations.len(), r.square_zero),
                    );
                }
                for (name, m) in &self.morphisms {
                    let r = m.verify();
                    report.assert(
                        &format!("morphism equations: `{name}`"),
                        r.is_valid(),
                        format!("{} residual entries; commutes: {}", r.violations.len(), r.commutes),
                    );
                }
                // round-trip canonicity
                let once = self.to_json();
                let reparsed = Workspace::parse_str(&once)?;
                report.assert(
                    "serialization round-trip",
                    reparsed.to_json() == once,
                    "serialize ∘ parse is idempotent",
                );
            }
            Command::Cohomology => {
                let (name, rep) = Self::pick(&self.reps, &opts.rep, "rep")?;
                let window = self.window(rep, opts);
                let vr = rep.verify_structure();
                report.assert("structure equations", vr.is_valid(), "");
                if vr.is_valid() {
                    let dims = cohomology_parallel(rep, window, opts.threads.max(1));
                    report.table(
                        &format!("H^n(G; {name})"),
                        vec!["n", "dim"],
                        dims.iter().map(|(n, d)| vec![n.to_string(), d.to_string()]).collect(),
                    );
                }
            }
            Command::Pages => {
                let (name, rep) = Self::pick(&self.reps, &opts.rep, "rep")?;
                let window = self.window(rep, opts);
                let r_max = opts.pages.unwrap_or(3);
                let analysis = crate::spectral::pages(rep, r_max, window)?;
                for page in &analysis.pages {
                    let rows: Vec<Vec<String>> = page
                        .dims
                        .iter()
                        .filter(|(_, &d)| d > 0)
                        .map(|(&(p, q), &d)| vec![p.to_string(), q.to_string(), d.to_string()])
                        .collect();
                    report.table(
                        &format!("E_{}^(p,q) of {name}", page.r),
                        vec!["p", "q", "dim"],
                        rows,
                    );
                }
                let rows: Vec<Vec<String>> = analysis
                    .e_infinity
                    .iter()
                    .filter(|(_, &d)| d > 0)
                    .map(|(&(p, q), &d)| vec![p.to_string(), q.to_string(), d.to_string()])
                    .collect();
                report.table("E_infinity", vec!["p", "q", "dim"], rows);
                report.assert(
                    "convergence: sum of E_infinity diagonals equals H^n",
                    analysis.convergence_ok,
                    "",
                );
            }
            Command::E2 => {
                let (_, rep) = Self::pick(&self.reps, &opts.rep, "rep")?;
                let window = self.window(rep, opts);
                let r = crate::spectral::e2_compare(rep, window)?;
                report.table(
                    "E_2 vs H^p(G; H^q(E))",
                    vec!["p", "q", "page dim", "transfer dim"],
                    r.table
                        .iter()
                        .map(|(&(p, q), &(a, b))| {
                            vec![p.to_string(), q.to_string(), a.to_string(), b.to_string()]
                        })
                        .collect(),
                );
                report.assert("E_2 identification", r.ok, "");
            }
            Command::Dual => {
                let (name, rep) = Self::pick(&self.reps, &opts.rep, "rep")?;
                let dual = rep.dualize();
                report.assert(
                    "dual satisfies the structure equations",
                    dual.verify_structure().is_valid(),
                    "",
                );
                let back = dual.dualize();
                let involutive = (0..=rep.max_k()).all(|k| back.r(k) == rep.r(k));
                report.assert("dualize is an involution", involutive, "");
                let window = self.window(rep, opts);
                let dims = dual.cohomology_unchecked(window);
                report.table(
                    &format!("H^n(G; {name}^*)"),
                    vec!["n", "dim"],
                    dims.iter().map(|(n, d)| vec![n.to_string(), d.to_string()]).collect(),
                );
            }
            Command::Cone => {
                let (name, phi) = Self::pick(&self.morphisms, &opts.morphism, "morphism")?;
                let cone = phi.mapping_cone()?;
                report.assert("cone satisfies the structure equations", cone.verify_structure().is_valid(), "");
                let window = self.window(&cone, opts);
                let dims = cone.cohomology_unchecked(window);
                report.table(
                    &format!("H^n of cone({name})"),
                    vec!["n", "dim"],
                    dims.iter().map(|(n, d)| vec![n.to_string(), d.to_string()]).collect(),
                );
            }
            Command::Pullback => {
                let (fname, functor) = Self::pick(&self.functors, &opts.functor, "functor")?;
                let (rname, rep) = Self::pick(&self.reps, &opts.rep, "rep")?;
                let pulled = crate::functor::pullback(functor, rep)?;
                report.assert(
                    "pullback satisfies the structure equations",
                    pulled.verify_structure().is_valid(),
                    format!("{rname} along {fname}"),
                );
                let window = self.window(&pulled, opts);
                let dims = pulled.cohomology_unchecked(window);
                report.table(
                    &format!("H^n of {fname}^*({rname})"),
                    vec!["n", "dim"],
                    dims.iter().map(|(n, d)| vec![n.to_string(), d.to_string()]).collect(),
                );
            }
            Command::Transfer => {
                let (name, rep) = Self::pick(&self.reps, &opts.rep, "rep")?;
                let t = crate::homotopy::transfer_to_cohomology(rep)?;
                report.assert("transferred structure equations", t.small.verify_structure().is_valid(), "");
                report.assert("projection morphism equations", t.phi.verify().is_valid(), "");
                let window = self.window(rep, opts);
                let dims_e = rep.cohomology_unchecked(window);
                let dims_h = t.small.cohomology_unchecked(window);
                report.assert("cohomology dims preserved", dims_e == dims_h, "");
                report.table(
                    &format!("H^n of {name} and of its cohomology model"),
                    vec!["n", "dim E", "dim H(E)"],
                    dims_e
                        .iter()
                        .zip(&dims_h)
                        .map(|(&(n, a), &(_, b))| vec![n.to_string(), a.to_string(), b.to_string()])
                        .collect(),
                );
            }
            Command::Invert => {
                let (name, phi) = Self::pick(&self.morphisms, &opts.morphism, "morphism")?;
                let inv = crate::homotopy::invert_quasi_iso(phi)?;
                report.assert(
                    &format!("homotopy identities for the inverse of `{name}`"),
                    true,
                    format!("verified on total degrees {:?}", inv.window),
                );
                report.assert("inverse morphism equations", inv.psi.verify().is_valid(), "");
            }
            Command::Vanish => {
                let (name, rep) = Self::pick(&self.reps, &opts.rep, "rep")?;
                let window = self.window(rep, opts);
                let r = crate::spectral::vanishing_check(rep, window)?;
                report.table(
                    &format!("H^n(G; {name})"),
                    vec!["n", "dim"],
                    r.h_dims.iter().map(|(n, d)| vec![n.to_string(), d.to_string()]).collect(),
                );
                let (a, b) = rep.bundle().amplitude();
                report.assert(
                    &format!("vanishing outside [{a}, {b}]"),
                    r.vanishing_ok,
                    "",
                );
                let tested: usize = r.kappa_tested.values().sum();
                report.assert(
                    "averaging identity d_1 κ = Id on closed E_1 classes",
                    r.kappa_ok,
                    format!("{tested} classes tested"),
                );
            }
            Command::Resolve => {
                let (_, rep) = Self::pick(&self.reps, &opts.rep, "rep")?;
                let depth = opts.levels.unwrap_or(2);
                let tower = crate::resolution::ResolutionTower::new(rep.clone(), depth);
                let (a, b) = rep.bundle().amplitude();
                let mut identities_ok = true;
                let mut squares_ok = true;
                let mut commutes_ok = true;
                for m in 0..=depth {
                    for k in 0..=2usize {
                        for l in a..=b {
                            identities_ok &= tower.homotopy_identity(m, k, l);
                            identities_ok &= tower.sigma_flat_identities(m, k, l);
                            if m < depth {
                                squares_ok &= tower.flat_squares_to_zero(m, k, l);
                            }
                        }
                    }
                    for i in 0..=m {
                        for n in a..=b + 1 {
                            commutes_ok &= tower.flat_commutes_with_d(m, i, n);
                        }
                    }
                }
                report.assert("σ₀* ♭* + ♭* σ₀* = Id", identities_ok, "");
                report.assert("(♭*)² = 0", squares_ok, "");
                report.assert("♭_i* commute with D", commutes_ok, "");
                let mut exact = true;
                for k in 0..=2usize {
                    for l in a..=b {
                        exact &= tower.row_exactness(k, l);
                    }
                }
                report.assert("co-augmented rows exact (rank computation)", exact, "");
                let grid = tower.dimension_grid((a, b + 2));
                report.table(
                    "co-augmented double-complex dimensions",
                    vec!["level", "total degree", "dim"],
                    grid.iter()
                        .map(|(&(m, n), &d)| vec![m.to_string(), n.to_string(), d.to_string()])
                        .collect(),
                );
                if rep.bundle().width() == 0 {
                    let horizontal = tower.horizontal_edge_cohomology();
                    let vertical = rep.cohomology_unchecked((a, a + horizontal.len() as i64 - 1));
                    let agree = horizontal
                        .iter()
                        .zip(&vertical)
                        .all(|(&h, &(_, v))| h == v);
                    report.assert("horizontal edge cohomology equals vertical", agree, "");
                }
            }
            Command::Banal => {
                let (name, space) = Self::pick(&self.gspaces, &opts.gspace, "gspace")?;
                let orbit_count = space.orbits_and_quotient().n_orbits;
                let f_dims = opts.fiber_dims.clone().unwrap_or_else(|| vec![1; orbit_count]);
                let top = opts.degrees.map(|(_, b)| b).unwrap_or(3);
                let r = crate::resolution::banal_check::<Rational>(space, &f_dims, top)?;
                report.table(
                    &format!("H^p(G ⋉ {name}; π*F)"),
                    vec!["p", "dim"],
                    r.h_dims.iter().map(|(n, d)| vec![n.to_string(), d.to_string()]).collect(),
                );
                report.assert(
                    "free-action cohomology: sections over the quotient in degree 0",
                    r.ok,
                    format!("expected H^0 = {}", r.expected_h0),
                );
            }
            Command::Hom => {
                let (sname, source) = Self::pick(&self.reps, &opts.rep, "rep")?;
                let (tname, target) = match &opts.target {
                    Some(n) => Self::pick(&self.reps, &Some(n.clone()), "target")?,
                    None => (sname, source),
                };
                let hom = HomComplex::new(source.clone(), target.clone())?;
                let window = opts.degrees.unwrap_or((-2, 2));
                let dims = hom.cohomology_dims(window);
                report.table(
                    &format!("H^n Hom({sname}, {tname})"),
                    vec!["n", "dim"],
                    dims.iter().map(|(n, d)| vec![n.to_string(), d.to_string()]).collect(),
                );
                report.assert(
                    "homotopy classes [E, F] = H^0",
                    true,
                    format!("dim = {}", hom.homotopy_class_dim()),
                );
                let closed = hom.closed_degree_zero();
                let all_valid = closed.iter().all(|m| m.verify().is_valid());
                report.assert(
                    "closed degree-0 elements are exactly the morphisms",
                    all_valid,
                    format!("{} basis morphisms re-verified", closed.len()),
                );
            }
        }
        Ok(report)
    }

    /// Executes the document's task list.
    pub fn run_tasks(&self, threads: usize) -> Result<Vec<Report>, Error> {
        let mut out = Vec::new();
        for task in &self.tasks {
            let cmd = Command::from_str(&task.command)?;
            let mut opts = RunOptions::from_task(task);
            opts.threads = threads;
            out.push(self.run(cmd, &opts)?);
        }
        Ok(out)
    }
}

/// Cohomology dims with the rank computations fanned out over a bounded
/// number of threads; exact arithmetic is unaffected by evaluation order.
pub fn cohomology_parallel(rep: &RationalRep, window: (i64, i64), width: usize) -> Vec<(i64, usize)> {
    let (n0, n1) = window;
    let degrees: Vec<i64> = (n0 - 1..=n1).collect();
    let ranks_and_dims: Vec<(usize, usize)> = if width <= 1 {
        degrees
            .iter()
            .map(|&n| (rep.structure_matrix(n).rank(), rep.layout(n).dim))
            .collect()
    } else {
        std::thread::scope(|scope| {
            let chunks: Vec<_> = degrees.chunks(degrees.len().div_ceil(width)).collect();
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    scope.spawn(move || {
                        chunk
                            .iter()
                            .map(|&n| (rep.structure_matrix(n).rank(), rep.layout(n).dim))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut out = Vec::new();
    for (i, &n) in degrees.iter().enumerate().skip(1) {
        let (rank_n, dim_n) = ranks_and_dims[i];
        let (rank_prev, _) = ranks_and_dims[i - 1];
        out.push((n, dim_n - rank_n - rank_prev));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_cocycle_document() -> String {
        // Z/2 with the cocycle representation built from η = d(f), f the
        // indicator of the nontrivial 1-string: trivial lines in degrees 0, 1
        serde_json::json!({
            "schema_version": 1,
            "groupoid": {
                "objects": ["pt"],
                "arrows": [
                    {"id": "e", "src": "pt", "tgt": "pt"},
                    {"id": "s", "src": "pt", "tgt": "pt"}
                ],
                "units": {"pt": "e"},
                "inverses": {"e": "e", "s": "s"},
                "comp": [
                    ["e", "e", "e"], ["e", "s", "s"], ["s", "e", "s"], ["s", "s", "e"]
                ]
            },
            "bundle": {
                "E": {"amplitude": [0, 1], "dims": {"pt": {"0": 1, "1": 1}}}
            },
            "rep": {
                "rho": {
                    "bundle": "E",
                    "tensors": [
                        {"k": 1, "string": ["e"], "l": 0, "matrix": [["1"]]},
                        {"k": 1, "string": ["e"], "l": 1, "matrix": [["1"]]},
                        {"k": 1, "string": ["s"], "l": 0, "matrix": [["1"]]},
                        {"k": 1, "string": ["s"], "l": 1, "matrix": [["1"]]},
                        // η = d(f): supported away from unit entries
                        {"k": 2, "string": ["s", "s"], "l": 1, "matrix": [["-2"]]}
                    ]
                }
            },
            "tasks": [
                {"command": "vanish", "rep": "rho", "degrees": [0, 4]}
            ]
        })
        .to_string()
    }

    #[test]
    fn parse_minimal_unit_groupoid() {
        let text = serde_json::json!({
            "schema_version": 1,
            "groupoid": {
                "objects": ["x"],
                "arrows": [{"id": "id_x", "src": "x", "tgt": "x"}],
                "units": {"x": "id_x"},
                "inverses": {"id_x": "id_x"},
                "comp": [["id_x", "id_x", "id_x"]]
            }
        })
        .to_string();
        let ws = Workspace::parse_str(&text).unwrap();
        assert_eq!(ws.main.n_objects(), 1);
    }

    #[test]
    fn dangling_reference_is_reported_with_path() {
        let text = serde_json::json!({
            "schema_version": 1,
            "groupoid": {
                "objects": ["x"],
                "arrows": [{"id": "f", "src": "x", "tgt": "nowhere"}],
                "units": {"x": "f"},
                "inverses": {"f": "f"},
                "comp": []
            }
        })
        .to_string();
        let err = Workspace::parse_str(&text).unwrap_err();
        match err {
            Error::AxiomViolation(errors) => {
                assert!(errors
                    .iter()
                    .any(|e| matches!(&**e, Error::DanglingReference { name, .. } if name == "nowhere")));
            }
            other => panic!("expected axiom violations, got {other:?}"),
        }
    }

    #[test]
    fn cocycle_fixture_parses_and_verifies() {
        let ws = Workspace::parse_str(&z2_cocycle_document()).unwrap();
        let rep = &ws.reps["rho"];
        assert!(rep.verify_structure().is_valid());
        // oracle: the stored η is scalar_d of the indicator cochain
        let g = &ws.main;
        let sigma = g.arrow_by_name("s").unwrap();
        let f: crate::cochain::ScalarCochain<Rational> = crate::cochain::Cochain::delta(
            1,
            0,
            crate::groupoid::GString::from_arrows(g, vec![sigma]).unwrap(),
            vec![Rational::from_integer(1.into())],
        );
        let eta = crate::cochain::scalar_d(g, &f);
        let r2 = rep.r(2);
        for (s, v) in eta.iter() {
            let block = r2.get(s).and_then(|m| m.block(1)).cloned();
            assert_eq!(block.map(|b| b.get(0, 0)), Some(v[0].clone()));
        }
    }

    #[test]
    fn roundtrip_is_canonical() {
        let ws = Workspace::parse_str(&z2_cocycle_document()).unwrap();
        let once = ws.to_json();
        let ws2 = Workspace::parse_str(&once).unwrap();
        assert_eq!(ws2.to_json(), once);
    }

    #[test]
    fn tasks_run_and_pass() {
        let ws = Workspace::parse_str(&z2_cocycle_document()).unwrap();
        let reports = ws.run_tasks(1).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].ok(), "{}", reports[0].render_text());
    }

    #[test]
    fn cohomology_command_threads_agree() {
        let ws = Workspace::parse_str(&z2_cocycle_document()).unwrap();
        let rep = &ws.reps["rho"];
        let serial = cohomology_parallel(rep, (0, 4), 1);
        let parallel = cohomology_parallel(rep, (0, 4), 3);
        assert_eq!(serial, parallel);
        assert_eq!(serial, rep.cohomology_unchecked((0, 4)));
    }
}
