//! The theorem-suite runner: a catalog of groups, topo-systems and products, and the
//! checks evaluated on every cell.
//!
//! Cells run in parallel; reports come back in canonical order (group order, group
//! descriptor, then system descriptor), so two runs with the same configuration print
//! the same bytes unless timings are requested.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bits::ElementSet;
use crate::filters::{
    enumerate_ultrafilters, exhaustive, pushforward_family, standard_maps, theorem_checks, MapTarget,
    SubgroupFilter,
};
use crate::group::{build_group, GroupDescriptor, DEFAULT_ORDER_CAP};
use crate::lattice::SubgroupLattice;
use crate::oracle::{brute_force_subgroups, BRUTE_FORCE_MAX_ORDER};
use crate::product::{direct_product, product_identities_check, product_toposys, tychonoff_certificate, ProductGroup};
use crate::toposys::{build_toposys, verify_toposys, TopoDescriptor, TopoSystem};

pub const DEFAULT_MAX_ORDER: usize = 24;
pub const DEFAULT_MAX_PRODUCT_ORDER: usize = 36;
/// Lattices up to this size get the exhaustive filter cross-check.
const EXHAUSTIVE_FILTER_LATTICE: usize = 10;
/// Factor systems paired up in product cells.
const PRODUCT_FACTOR_SYSTEMS: [&str; 3] = ["discrete", "normal", "trivial"];

/// Checks on a whole group, reported with toposys `-`.
const GROUP_SUITES: [&str; 4] = ["lattice-completeness", "ultrafilter-machinery", "p-group-lemma", "product-identities"];
/// Checks on a (group, topo-system) cell.
const CELL_SUITES: [&str; 13] = [
    "toposys-axioms",
    "interior-core",
    "interior-laws",
    "prime-order",
    "weak-closed",
    "closure-closed",
    "t-closed-lattice",
    "compact-cover",
    "compactness",
    "hausdorff-equivalence",
    "convergence-continuity",
    "quotient-probe",
    "star-topology",
];
/// Checks on a product cell.
const PRODUCT_SUITES: [&str; 2] = ["product-projections", "tychonoff"];

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    GROUP_SUITES.into_iter().chain(CELL_SUITES).chain(PRODUCT_SUITES)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// An observation about a claim that is probed rather than asserted.
    Finding,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Finding => "FINDING",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub group: String,
    pub toposys: String,
    pub status: Status,
    pub witness: Option<Value>,
    /// Only filled in when timings are requested, to keep reruns byte-identical.
    pub elapsed_ms: Option<u64>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<7} {:<24} {} [{}]", self.status, self.check, self.group, self.toposys)?;
        if let Some(w) = &self.witness {
            write!(f, " {w}")?;
        }
        if let Some(ms) = self.elapsed_ms {
            write!(f, " ({ms} ms)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub finding: usize,
}

impl Summary {
    pub fn of(reports: &[CheckReport]) -> Self {
        let mut s = Summary::default();
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Finding => s.finding += 1,
            }
        }
        s
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.fail > 0)
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} pass, {} fail, {} finding", self.pass, self.fail, self.finding)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(ConfigError(format!("unknown format `{s}` (expected text or json)"))),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0}")]
pub struct ConfigError(pub String);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub max_group_order: usize,
    pub max_product_order: usize,
    /// Replaces the group catalog when set.
    pub groups: Option<Vec<GroupDescriptor>>,
    /// Replaces the per-group system list when set; product cells are matched by name.
    pub systems: Option<Vec<String>>,
    /// Empty means every suite.
    pub suites: Vec<String>,
    pub format: Format,
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_group_order: DEFAULT_MAX_ORDER,
            max_product_order: DEFAULT_MAX_PRODUCT_ORDER,
            groups: None,
            systems: None,
            suites: Vec::new(),
            format: Format::Text,
            timings: false,
        }
    }
}

fn parse_list(value: &str, sep: char) -> Vec<String> {
    value.split(sep).map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

impl SuiteConfig {
    /// Applies `key = value` lines. Lists of groups and systems are separated by `;`,
    /// suites by `,`. Blank lines and `#` comments are ignored.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {}: expected key = value", no + 1)))?;
            self.set(key.trim(), value.trim()).map_err(|e| ConfigError(format!("line {}: {e}", no + 1)))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let number = |v: &str| v.parse::<usize>().map_err(|_| ConfigError(format!("`{key}` needs a number, got `{v}`")));
        match key {
            "max_order" | "max_group_order" => self.max_group_order = number(value)?,
            "max_product_order" => self.max_product_order = number(value)?,
            "groups" => {
                let groups = parse_list(value, ';')
                    .iter()
                    .map(|g| g.parse::<GroupDescriptor>().map_err(|e| ConfigError(e.to_string())))
                    .collect::<Result<_, _>>()?;
                self.groups = Some(groups);
            }
            "systems" => {
                let systems = parse_list(value, ';');
                for s in &systems {
                    if !s.starts_with("product(") {
                        s.parse::<TopoDescriptor>().map_err(|e| ConfigError(e.to_string()))?;
                    }
                }
                self.systems = Some(systems);
            }
            "suites" => self.suites = parse_list(value, ','),
            "format" => self.format = value.parse()?,
            "timings" => {
                self.timings = value.parse().map_err(|_| ConfigError("`timings` needs true or false".to_string()))?
            }
            _ => return Err(ConfigError(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for s in &self.suites {
            if !suite_names().any(|n| n == s) {
                return Err(ConfigError(format!("unknown suite `{s}`")));
            }
        }
        if self.max_group_order > DEFAULT_ORDER_CAP || self.max_product_order > DEFAULT_ORDER_CAP {
            return Err(ConfigError(format!("orders are capped at {DEFAULT_ORDER_CAP}")));
        }
        if let Some(groups) = &self.groups {
            for g in groups {
                g.validate().map_err(|e| ConfigError(e.to_string()))?;
                if g.order() > self.max_group_order {
                    return Err(ConfigError(format!("{g} has order {} above max_order {}", g.order(), self.max_group_order)));
                }
            }
        }
        Ok(())
    }

    fn wants(&self, suite: &str) -> bool {
        self.suites.is_empty() || self.suites.iter().any(|s| s == suite)
    }
}

/// Catalog groups up to `max_order`, in canonical order.
pub fn catalog_groups(max_order: usize) -> Vec<GroupDescriptor> {
    let mut out: Vec<String> = Vec::new();
    out.extend([2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16].map(|n| format!("cyclic:{n}")));
    out.extend(["2x2", "2x4", "2x2x2", "3x3", "2x6", "2x8", "4x4", "2x2x2x2"].map(|a| format!("abelian:{a}")));
    out.extend([3, 4, 5, 6, 8].map(|n| format!("dihedral:{n}")));
    out.extend(["quaternion:8", "sym:3", "sym:4", "alt:4"].map(String::from));
    out.extend(["product(cyclic:2,sym:3)", "product(quaternion:8,cyclic:2)", "product(cyclic:3,sym:3)"].map(String::from));
    let mut groups: Vec<GroupDescriptor> =
        out.iter().map(|s| s.parse().expect("catalog descriptor")).filter(|g: &GroupDescriptor| g.order() <= max_order).collect();
    groups.sort_by_key(|g| (g.order(), g.to_string()));
    groups
}

/// Factor lists for the product catalog: pairs of small groups and a few triples.
pub fn catalog_products(max_order: usize) -> Vec<Vec<GroupDescriptor>> {
    let small = ["cyclic:2", "cyclic:3", "cyclic:4", "abelian:2x2", "cyclic:5", "cyclic:6", "sym:3"];
    let mut out: Vec<Vec<&str>> = Vec::new();
    for (i, a) in small.iter().enumerate() {
        for b in &small[i..] {
            out.push(vec![a, b]);
        }
    }
    out.extend([
        vec!["cyclic:2", "cyclic:2", "cyclic:2"],
        vec!["cyclic:2", "cyclic:2", "cyclic:3"],
        vec!["cyclic:2", "cyclic:3", "cyclic:3"],
        vec!["cyclic:3", "cyclic:3", "cyclic:3"],
        vec!["cyclic:2", "cyclic:2", "sym:3"],
    ]);
    out.into_iter()
        .map(|fs| fs.iter().map(|f| f.parse().expect("catalog descriptor")).collect::<Vec<GroupDescriptor>>())
        .filter(|fs| fs.iter().map(GroupDescriptor::order).product::<usize>() <= max_order)
        .collect()
}

/// Descriptors covering every constructor family, parameterised by lattice indices.
pub fn catalog_systems(lattice: &SubgroupLattice) -> Vec<String> {
    let top = lattice.top();
    let mut out: Vec<String> = [
        "discrete",
        "trivial",
        "cofinite",
        "normal",
        "characteristic",
        "variety:abelian",
        "variety:exponent-2",
        "variety:exponent-3",
    ]
    .map(String::from)
    .to_vec();
    out.push(format!("thk:gen{{}}:#{top}"));
    out.push(format!("conj:#{top}"));
    if top >= 2 {
        let picks = [1, top / 2, top - 1];
        for &p in &picks {
            out.push(format!("principal:#{p}"));
        }
        out.push(format!("thk:#1:#{top}"));
        out.push("conj:#1".to_string());
        out.push(format!("conj:#{}", top - 1));
        out.push(format!("generated:#1,#{}", top - 1));
    }
    out.sort();
    out.dedup();
    out
}

struct GroupCtx {
    descriptor: String,
    order: usize,
    lattice: Arc<SubgroupLattice>,
    maps: OnceLock<Vec<MapTarget>>,
    /// Set when the group is a direct product eligible for product cells.
    product: Option<ProductCtx>,
}

struct ProductCtx {
    product: Arc<ProductGroup>,
    factor_lattices: Vec<Arc<SubgroupLattice>>,
    ultrafilters: Vec<SubgroupFilter>,
}

enum CellKind {
    Group,
    System(String),
    /// Names of the factor systems.
    Product(Vec<String>),
}

struct Cell {
    ctx: Arc<GroupCtx>,
    kind: CellKind,
}

impl Cell {
    fn toposys(&self) -> String {
        match &self.kind {
            CellKind::Group => "-".into(),
            CellKind::System(s) => s.clone(),
            CellKind::Product(names) => format!("product({})", names.join(",")),
        }
    }

    fn rank(&self) -> u8 {
        match self.kind {
            CellKind::Group => 0,
            CellKind::System(_) => 1,
            CellKind::Product(_) => 2,
        }
    }
}

struct Emitter<'a> {
    config: &'a SuiteConfig,
    group: String,
    toposys: String,
    out: Vec<CheckReport>,
}

impl Emitter<'_> {
    fn run(&mut self, check: &str, f: impl FnOnce() -> (Status, Option<Value>)) {
        if !self.config.wants(check) {
            return;
        }
        let start = Instant::now();
        let (status, witness) = f();
        debug_assert!(status != Status::Fail || witness.is_some(), "{check}: fail without witness");
        self.out.push(CheckReport {
            check: check.to_string(),
            group: self.group.clone(),
            toposys: self.toposys.clone(),
            status,
            witness,
            elapsed_ms: self.config.timings.then(|| start.elapsed().as_millis() as u64),
        });
    }
}

fn pass() -> (Status, Option<Value>) {
    (Status::Pass, None)
}

fn pass_with(v: Value) -> (Status, Option<Value>) {
    (Status::Pass, Some(v))
}

fn fail(v: Value) -> (Status, Option<Value>) {
    (Status::Fail, Some(v))
}

fn prime_power(n: usize) -> Option<usize> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|p| n.is_multiple_of(*p))?;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    (m == 1).then_some(p)
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn group_checks(e: &mut Emitter, ctx: &GroupCtx) {
    let l = &ctx.lattice;
    let g = l.group();
    if ctx.order <= BRUTE_FORCE_MAX_ORDER {
        e.run("lattice-completeness", || {
            let brute = brute_force_subgroups(g);
            if brute.as_slice() == l.all() {
                pass_with(json!({ "subgroups": brute.len() }))
            } else {
                let missing: Vec<&ElementSet> = brute.iter().filter(|s| l.index_of(**s).is_none()).collect();
                let extra: Vec<&ElementSet> = l.all().iter().filter(|s| !brute.contains(s)).collect();
                fail(json!({ "missing": missing, "extra": extra, "brute": brute.len(), "enumerated": l.len() }))
            }
        });
    }
    e.run("ultrafilter-machinery", || ultrafilter_machinery(l));
    if let Some(p) = prime_power(ctx.order) {
        e.run("p-group-lemma", || {
            let meet_nontrivially = (1..l.len()).all(|a| (a..l.len()).all(|b| l.meet(a, b) != 0));
            let order_p = (0..l.len()).filter(|&i| l.subgroup_order(i) == p).count();
            let detail = json!({ "p": p, "nontrivial_meets": meet_nontrivially, "subgroups_of_order_p": order_p });
            if meet_nontrivially == (order_p == 1) {
                pass_with(detail)
            } else {
                fail(detail)
            }
        });
    }
    if let Some(pc) = &ctx.product {
        e.run("product-identities", || match product_identities_check(&pc.product, l, &pc.factor_lattices) {
            Ok(r) if r.failure.is_none() => pass_with(json!({ "pairs": r.pairs_checked })),
            Ok(r) => fail(json!(r.failure)),
            Err(err) => fail(json!({ "error": err.to_string() })),
        });
    }
}

/// Every filter is the up-set of its (non-trivial) kernel, so iterating over kernels
/// reaches all of them; small lattices are also checked against family enumeration.
fn ultrafilter_machinery(l: &Arc<SubgroupLattice>) -> (Status, Option<Value>) {
    let ultra = match enumerate_ultrafilters(l) {
        Ok(u) => u,
        Err(err) => return fail(json!({ "error": err.to_string() })),
    };
    let all: Vec<SubgroupFilter> = (1..l.len()).map(|k| SubgroupFilter::up_set(l, k)).collect();
    let mut exhaustive_checked = false;
    if l.len() <= EXHAUSTIVE_FILTER_LATTICE {
        exhaustive_checked = true;
        let brute = exhaustive::all_filters(l);
        if brute.len() != all.len() || all.iter().any(|f| !brute.contains(f.members())) {
            return fail(json!({ "filters_by_kernel": all.len(), "filters_by_families": brute.len() }));
        }
        for f in &all {
            if f.is_ultrafilter().is_ok() != exhaustive::is_ultrafilter_by_families(l, f.members()) {
                return fail(json!({ "recognition_disagrees_on": f.indices() }));
            }
        }
    }
    for f in &all {
        let u = f.extend_to_ultrafilter();
        if !f.is_subset(&u) || u.is_ultrafilter().is_err() {
            return fail(json!({ "extension_failed_for": f.indices() }));
        }
    }
    let recognised: Vec<&SubgroupFilter> = all.iter().filter(|f| f.is_ultrafilter().is_ok()).collect();
    if recognised.len() != ultra.len() || ultra.iter().any(|u| !recognised.contains(&u)) {
        return fail(json!({ "enumerated": ultra.len(), "recognised": recognised.len() }));
    }
    pass_with(json!({ "filters": all.len(), "ultrafilters": ultra.len(), "exhaustive": exhaustive_checked }))
}

fn system_checks(e: &mut Emitter, ctx: &GroupCtx, name: &str) {
    let l = &ctx.lattice;
    let built = name
        .parse::<TopoDescriptor>()
        .map_err(|err| err.to_string())
        .and_then(|d| build_toposys(l, &d).map_err(|err| err.to_string()));
    let t = match built {
        Ok(t) => t,
        Err(err) => {
            e.run("toposys-axioms", || fail(json!({ "error": err })));
            for check in CELL_SUITES.iter().skip(1) {
                e.run(check, || (Status::Finding, Some(json!({ "skipped": "system could not be built" }))));
            }
            return;
        }
    };
    e.run("toposys-axioms", || match verify_toposys(l, t.members()) {
        Ok(()) => pass_with(json!({ "topens": t.len() })),
        Err(v) => fail(json!(v)),
    });
    if matches!(t.descriptor(), TopoDescriptor::Normal) {
        e.run("interior-core", || {
            match (0..l.len()).find(|&x| t.interior(x) != l.core(x)) {
                None => pass_with(json!({ "subgroups": l.len() })),
                Some(x) => fail(json!({ "subgroup": x, "interior": t.interior(x), "core": l.core(x) })),
            }
        });
    }
    e.run("interior-laws", || interior_laws(&t));
    e.run("prime-order", || {
        let g = l.group();
        let premise = (1..g.order()).all(|x| t.t_closed_checks(l.cyclic(x)).map(|r| r.t_closed).unwrap_or(false));
        let bad = (1..g.order()).find(|&x| !is_prime(g.element_order(x)));
        let detail = json!({ "premise": premise, "non_prime_element": bad });
        if premise && bad.is_some() {
            fail(detail)
        } else {
            pass_with(detail)
        }
    });
    e.run("weak-closed", || {
        if !t.is_hausdorff().hausdorff {
            return pass_with(json!({ "hausdorff": false }));
        }
        for a in 0..l.len() {
            match t.t_closed_checks(a) {
                Ok(r) if r.weak_t_closed => {}
                Ok(r) => return fail(json!({ "subgroup": a, "x": r.weak_witness })),
                Err(err) => return fail(json!({ "error": err.to_string() })),
            }
        }
        pass_with(json!({ "hausdorff": true }))
    });
    e.run("closure-closed", || {
        for x in 0..l.len() {
            let c = match t.closure_and_limits(x) {
                Ok((_, c)) => c,
                Err(err) => return fail(json!({ "error": err.to_string() })),
            };
            match t.t_closed_checks(c) {
                Ok(r) if r.t_closed => {}
                Ok(r) => {
                    return (
                        Status::Finding,
                        Some(json!({ "subgroup": x, "closure": c, "not_separated": r.t_closed_witness })),
                    )
                }
                Err(err) => return fail(json!({ "error": err.to_string() })),
            }
        }
        pass()
    });
    e.run("t-closed-lattice", || {
        let closed: Vec<usize> = (0..l.len()).filter(|&a| t.t_closed_checks(a).map(|r| r.t_closed).unwrap_or(false)).collect();
        if !closed.contains(&0) || !closed.contains(&l.top()) {
            return fail(json!({ "t_closed": closed, "missing": "1 or G" }));
        }
        for (i, &a) in closed.iter().enumerate() {
            for &b in &closed[i + 1..] {
                if !closed.contains(&l.meet(a, b)) {
                    return fail(json!({ "a": a, "b": b, "meet": l.meet(a, b) }));
                }
            }
        }
        pass_with(json!({ "t_closed": closed.len() }))
    });
    e.run("compact-cover", || {
        let topens = t.topens();
        match t.find_finite_subcover(l.top(), &topens) {
            Ok(Some(c)) => pass_with(json!({ "subcover": c.subcover, "exact": c.exact })),
            Ok(None) => fail(json!({ "error": "topens do not cover G" })),
            Err(err) => fail(json!({ "error": err.to_string() })),
        }
    });

    let wants_theorems = ["compactness", "hausdorff-equivalence", "convergence-continuity"].iter().any(|s| e.config.wants(s));
    if wants_theorems {
        let start = Instant::now();
        let maps = ctx.maps.get_or_init(|| standard_maps(l));
        let report = theorem_checks(&t, maps);
        let shared_ms = e.config.timings.then(|| start.elapsed().as_millis() as u64);
        let first = e.out.len();
        match report {
            Ok(r) => {
                e.run("compactness", || {
                    let detail = json!({
                        "ultrafilters": r.ultrafilters,
                        "identity_never_limit": r.identity_never_limit,
                        "lemma": "ultrafilters are principal (derived)",
                    });
                    if r.non_convergent.is_none() && r.identity_never_limit {
                        pass_with(detail)
                    } else {
                        fail(json!({ "non_convergent": r.non_convergent, "detail": detail }))
                    }
                });
                e.run("hausdorff-equivalence", || {
                    let detail = json!({ "hausdorff": r.hausdorff, "multi_limits": r.multi_limits });
                    if r.hausdorff_equivalence {
                        pass_with(detail)
                    } else {
                        fail(detail)
                    }
                });
                e.run("convergence-continuity", || {
                    let detail = json!({
                        "continuous_maps": r.continuous_maps,
                        "checks": r.continuity_checks,
                        "improper_pushforwards": r.improper_pushforwards,
                    });
                    match &r.continuity_failure {
                        None => pass_with(detail),
                        Some(f) => fail(json!({ "failure": f, "detail": detail })),
                    }
                });
            }
            Err(err) => {
                for check in ["compactness", "hausdorff-equivalence", "convergence-continuity"] {
                    e.run(check, || fail(json!({ "error": err.to_string() })));
                }
            }
        }
        if let Some(ms) = shared_ms {
            for r in &mut e.out[first..] {
                r.elapsed_ms = Some(ms);
            }
        }
    }

    e.run("quotient-probe", || {
        let mut normals = 0;
        let mut findings = Vec::new();
        for n in (0..l.len()).filter(|&n| l.is_normal(n)) {
            normals += 1;
            match t.quotient_toposys(n) {
                Ok(p) => {
                    if let Err(v) = &p.verification {
                        findings.push(json!({ "normal": n, "candidate": p.candidate_indices(), "violation": v }));
                    }
                }
                Err(err) => return fail(json!({ "normal": n, "error": err.to_string() })),
            }
        }
        if findings.is_empty() {
            pass_with(json!({ "normals": normals }))
        } else {
            (Status::Finding, Some(json!({ "normals": normals, "violations": findings })))
        }
    });
    e.run("star-topology", || {
        let r = t.star_topology_checks();
        if r.never_hausdorff && r.induced_inclusion {
            pass_with(json!({ "star_open_sets": r.star_open_sets }))
        } else {
            fail(json!(r))
        }
    });
}

fn interior_laws(t: &TopoSystem) -> (Status, Option<Value>) {
    let l = t.lattice();
    let discrete = t.is_discrete();
    for x in 0..l.len() {
        let i = t.interior(x);
        let by_elements = t
            .topens()
            .into_iter()
            .map(|a| l.members(a))
            .filter(|m| m.is_subset(l.members(x)))
            .fold(ElementSet::EMPTY, ElementSet::union);
        if by_elements != l.members(i) {
            return fail(json!({ "subgroup": x, "interior": i, "interior_elements": by_elements }));
        }
        if !t.contains(i) || t.interior(i) != i || !l.le(i, x) {
            return fail(json!({ "subgroup": x, "interior": i, "law": "topen, idempotent, contained" }));
        }
        if discrete && i != x {
            return fail(json!({ "subgroup": x, "interior": i, "law": "discrete interior" }));
        }
        if let Some(y) = (x + 1..l.len()).find(|&y| l.le(x, y) && !l.le(i, t.interior(y))) {
            return fail(json!({ "subgroup": x, "above": y, "law": "monotone" }));
        }
    }
    pass()
}

fn product_checks(e: &mut Emitter, ctx: &GroupCtx, names: &[String]) {
    let pc = ctx.product.as_ref().expect("product cell");
    let built: Result<Vec<TopoSystem>, String> = names
        .iter()
        .zip(&pc.factor_lattices)
        .map(|(n, fl)| {
            let d: TopoDescriptor = n.parse().map_err(|err: crate::toposys::ToposysError| err.to_string())?;
            build_toposys(fl, &d).map_err(|err| err.to_string())
        })
        .collect();
    let p = built.and_then(|fs| product_toposys(pc.product.clone(), ctx.lattice.clone(), fs).map_err(|err| err.to_string()));
    let p = match p {
        Ok(p) => p,
        Err(err) => {
            for check in PRODUCT_SUITES {
                e.run(check, || fail(json!({ "error": err.clone() })));
            }
            return;
        }
    };
    e.run("product-projections", || match p.projections_continuous() {
        Ok(true) => pass_with(json!({ "topens": p.system.len() })),
        Ok(false) => fail(json!({ "error": "a projection is not a topomorphism" })),
        Err(err) => fail(json!({ "error": err.to_string() })),
    });
    e.run("tychonoff", || {
        let mut replayed = 0;
        let mut degenerate = 0;
        let mut compat = 0;
        for u in &pc.ultrafilters {
            let c = match tychonoff_certificate(&p, u) {
                Ok(c) => c,
                Err(err) => return fail(json!({ "ultrafilter": u.indices(), "error": err.to_string() })),
            };
            replayed += c.replay.len();
            degenerate += c.degenerate_factors();
            let limits = match u.convergence_set(&p.system) {
                Ok(s) => s.points,
                Err(err) => return fail(json!({ "error": err.to_string() })),
            };
            for (i, (pi, ft)) in pc.product.projections().iter().zip(&p.factors).enumerate() {
                let pf = match pushforward_family(pi, u, ft.lattice()) {
                    Ok(pf) => pf,
                    Err(err) => return fail(json!({ "error": err.to_string() })),
                };
                for x in limits.iter() {
                    compat += 1;
                    if !pf.converges_to(ft, pi.apply(x)).converges {
                        return fail(json!({ "ultrafilter": u.indices(), "limit": x, "factor": i }));
                    }
                }
            }
        }
        pass_with(json!({
            "ultrafilters": pc.ultrafilters.len(),
            "replayed_topens": replayed,
            "degenerate_factor_steps": degenerate,
            "pushforward_limit_checks": compat,
        }))
    });
}

fn build_ctx(descriptor: &GroupDescriptor, max_product_order: usize) -> Result<GroupCtx, ConfigError> {
    let group = Arc::new(build_group(descriptor, DEFAULT_ORDER_CAP).map_err(|e| ConfigError(e.to_string()))?);
    let lattice = Arc::new(SubgroupLattice::enumerate(group.clone()));
    let product = match descriptor {
        GroupDescriptor::Product(fs) if group.order() <= max_product_order => {
            let factors = fs
                .iter()
                .map(|f| build_group(f, DEFAULT_ORDER_CAP).map(Arc::new))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ConfigError(e.to_string()))?;
            let product = Arc::new(direct_product(factors, DEFAULT_ORDER_CAP).map_err(|e| ConfigError(e.to_string()))?);
            let factor_lattices =
                product.factors().iter().map(|g| Arc::new(SubgroupLattice::enumerate(g.clone()))).collect();
            let ultrafilters = enumerate_ultrafilters(&lattice).map_err(|e| ConfigError(e.to_string()))?;
            Some(ProductCtx { product, factor_lattices, ultrafilters })
        }
        _ => None,
    };
    Ok(GroupCtx { descriptor: descriptor.to_string(), order: group.order(), lattice, maps: OnceLock::new(), product })
}

fn factor_system_combos(k: usize) -> Vec<Vec<String>> {
    (0..k).fold(vec![Vec::new()], |acc, _| {
        acc.iter()
            .flat_map(|prefix| {
                PRODUCT_FACTOR_SYSTEMS.iter().map(move |s| {
                    let mut v: Vec<String> = prefix.clone();
                    v.push(s.to_string());
                    v
                })
            })
            .collect()
    })
}

/// Runs every selected check over the configured cells.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>, ConfigError> {
    config.validate()?;
    let mut descriptors: Vec<GroupDescriptor> = match &config.groups {
        Some(gs) => gs.clone(),
        None => {
            let mut all = catalog_groups(config.max_group_order);
            all.extend(catalog_products(config.max_product_order).into_iter().map(GroupDescriptor::Product));
            all
        }
    };
    descriptors.sort_by_key(|g| (g.order(), g.to_string()));
    descriptors.dedup_by_key(|g| g.to_string());

    let ctxs: Vec<Arc<GroupCtx>> = descriptors
        .par_iter()
        .map(|d| build_ctx(d, config.max_product_order).map(Arc::new))
        .collect::<Result<_, _>>()?;

    let in_group_catalog = |ctx: &GroupCtx| ctx.order <= config.max_group_order;
    let mut cells = Vec::new();
    for ctx in &ctxs {
        if config.systems.is_none() {
            cells.push(Cell { ctx: ctx.clone(), kind: CellKind::Group });
        }
        if in_group_catalog(ctx) {
            let systems = config.systems.clone().unwrap_or_else(|| catalog_systems(&ctx.lattice));
            for s in systems.into_iter().filter(|s| !s.starts_with("product(")) {
                cells.push(Cell { ctx: ctx.clone(), kind: CellKind::System(s) });
            }
        }
        if let Some(pc) = &ctx.product {
            for names in factor_system_combos(pc.factor_lattices.len()) {
                let cell = Cell { ctx: ctx.clone(), kind: CellKind::Product(names) };
                if config.systems.as_ref().is_none_or(|ss| ss.contains(&cell.toposys())) {
                    cells.push(cell);
                }
            }
        }
    }
    cells.sort_by(|a, b| {
        (a.ctx.order, &a.ctx.descriptor, a.rank(), a.toposys()).cmp(&(b.ctx.order, &b.ctx.descriptor, b.rank(), b.toposys()))
    });

    let reports: Vec<Vec<CheckReport>> = cells
        .par_iter()
        .map(|cell| {
            let mut e = Emitter {
                config,
                group: cell.ctx.descriptor.clone(),
                toposys: cell.toposys(),
                out: Vec::new(),
            };
            match &cell.kind {
                CellKind::Group => group_checks(&mut e, &cell.ctx),
                CellKind::System(s) => system_checks(&mut e, &cell.ctx, s),
                CellKind::Product(names) => product_checks(&mut e, &cell.ctx, names),
            }
            e.out
        })
        .collect();
    Ok(reports.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(lines: &str) -> SuiteConfig {
        let mut c = SuiteConfig::default();
        c.apply_file(lines).unwrap();
        c
    }

    #[test]
    fn config_parsing() {
        let c = config("# comment\nmax_order = 12\ngroups = sym:3; product(cyclic:2,cyclic:3)\nsuites = compactness,tychonoff\nformat=json\n");
        assert_eq!(c.max_group_order, 12);
        assert_eq!(c.groups.as_ref().unwrap().len(), 2);
        assert_eq!(c.format, Format::Json);
        assert!(c.validate().is_ok());

        let mut c = SuiteConfig::default();
        assert!(c.apply_file("groups = mystery:3").is_err());
        assert!(c.apply_file("colour = blue").is_err());
        c.suites = vec!["nope".into()];
        assert!(c.validate().is_err());
        let c = config("groups = sym:4\nmax_order = 12");
        assert!(c.validate().is_err());
    }

    #[test]
    fn catalog_shape() {
        let groups = catalog_groups(24);
        assert!(groups.windows(2).all(|w| (w[0].order(), w[0].to_string()) <= (w[1].order(), w[1].to_string())));
        assert!(groups.iter().all(|g| g.order() <= 24));
        assert!(catalog_groups(8).iter().all(|g| g.order() <= 8));
        assert!(catalog_products(36).iter().all(|fs| fs.iter().all(|f| f.order() <= 6)));
    }

    #[test]
    fn single_cell_and_determinism() {
        let c = config("groups = sym:3\nsystems = normal");
        let a = run_suite(&c).unwrap();
        assert!(a.iter().all(|r| r.group == "sym:3" && r.toposys == "normal"));
        assert_eq!(a.len(), CELL_SUITES.len());
        assert!(a.iter().all(|r| r.status != Status::Fail), "{a:#?}");
        let b = run_suite(&c).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

        let h = a.iter().find(|r| r.check == "hausdorff-equivalence").unwrap();
        assert_eq!(h.witness.as_ref().unwrap()["hausdorff"], json!(false));
    }

    #[test]
    fn small_default_run_passes() {
        let c = config("max_order = 8\nmax_product_order = 8");
        let reports = run_suite(&c).unwrap();
        let fails: Vec<&CheckReport> = reports.iter().filter(|r| r.status == Status::Fail).collect();
        assert!(fails.is_empty(), "{fails:#?}");
        assert!(reports.iter().any(|r| r.check == "tychonoff"));
        assert!(reports.iter().any(|r| r.check == "lattice-completeness"));
    }
}
