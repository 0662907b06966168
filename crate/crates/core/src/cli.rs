//! Command-line front end. Exit codes: 0 when everything checked passes, 1 when a check
//! fails or an operation reports a mathematical failure, 2 for usage and config errors.

use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bits::ElementSet;
use crate::filters::{enumerate_ultrafilters, FilterLiteral, SubgroupFilter};
use crate::group::{build_group, split_top_level, GroupDescriptor, DEFAULT_ORDER_CAP};
use crate::lattice::{SubgroupLattice, SubgroupLiteral};
use crate::product::{direct_product, product_identities_check, product_toposys, tychonoff_certificate};
use crate::suite::{run_suite, Format, Summary, SuiteConfig};
use crate::toposys::{build_toposys, verify_toposys, TopoDescriptor, TopoSystem};

#[derive(Parser, Debug)]
#[command(name = "topogroup", version, about = "Topo-systems, subgroup filters and convergence on finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the subgroups of a group with their canonical indices.
    Lattice {
        #[arg(long)]
        group: String,
    },
    /// Build a topo-system and list its topens.
    Toposys {
        #[command(flatten)]
        cell: CellArgs,
        /// Re-run the axiom verifier and exit 1 on a violation.
        #[arg(long)]
        verify: bool,
    },
    /// Interior, boundary, limit points, closure and T-closedness of a subgroup.
    Closure {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long)]
        subgroup: String,
    },
    /// Hausdorff test with the first inseparable pair.
    Hausdorff {
        #[command(flatten)]
        cell: CellArgs,
    },
    /// Minimal subcover of a subgroup by topens.
    Cover {
        #[command(flatten)]
        cell: CellArgs,
        /// Subgroup to cover; defaults to the whole group.
        #[arg(long)]
        subgroup: Option<String>,
        /// Comma-separated topens (`#i,#j,..`); defaults to every topen.
        #[arg(long)]
        cover: Option<String>,
    },
    /// Inspect a subgroup filter, or list all ultrafilters when none is given.
    Filters {
        #[arg(long)]
        group: String,
        #[arg(long)]
        filter: Option<String>,
    },
    /// Limits of a filter in a topo-system.
    Converge {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long)]
        filter: String,
        /// Certificate for one point instead of the whole convergence set.
        #[arg(long)]
        point: Option<usize>,
    },
    /// Product system, product identities and compactness certificates.
    Product {
        /// `product(D1,D2,..)`.
        #[arg(long)]
        group: String,
        /// Factor systems `T1,T2,..`, optionally written `toposys=T1,T2`.
        #[arg(long)]
        sys: String,
        /// Certify one ultrafilter instead of all of them.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Run the theorem suites over the catalog.
    Theorems(TheoremArgs),
}

#[derive(Args, Debug)]
struct CellArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    sys: String,
}

#[derive(Args, Debug)]
struct TheoremArgs {
    /// Suites to run (repeatable); all when omitted.
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long)]
    max_order: Option<usize>,
    #[arg(long)]
    max_product_order: Option<usize>,
    /// Restrict to these groups (repeatable).
    #[arg(long = "group")]
    groups: Vec<String>,
    /// Restrict to these systems (repeatable).
    #[arg(long = "sys")]
    systems: Vec<String>,
    /// `key = value` file applied before the other flags.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    /// Fill in `elapsed_ms`; reruns are then no longer byte-identical.
    #[arg(long)]
    timings: bool,
}

/// Failure of a subcommand: exit code and message.
struct Exit(i32, String);

fn usage(e: impl ToString) -> Exit {
    Exit(2, e.to_string())
}

fn failed(e: impl ToString) -> Exit {
    Exit(1, e.to_string())
}

struct Out<'a> {
    w: &'a mut dyn Write,
    json: bool,
}

impl Out<'_> {
    /// Prints `value` as one JSON line, or the text lines otherwise.
    fn emit(&mut self, value: Value, text: impl FnOnce() -> Vec<String>) {
        if self.json {
            let _ = writeln!(self.w, "{value}");
        } else {
            for line in text() {
                let _ = writeln!(self.w, "{line}");
            }
        }
    }
}

fn lattice_for(group: &str) -> Result<Arc<SubgroupLattice>, Exit> {
    let d: GroupDescriptor = group.parse().map_err(usage)?;
    let g = build_group(&d, DEFAULT_ORDER_CAP).map_err(usage)?;
    Ok(Arc::new(SubgroupLattice::enumerate(Arc::new(g))))
}

fn system_for(cell: &CellArgs) -> Result<TopoSystem, Exit> {
    let l = lattice_for(&cell.group)?;
    let d: TopoDescriptor = cell.sys.parse().map_err(usage)?;
    build_toposys(&l, &d).map_err(usage)
}

fn subgroup(l: &SubgroupLattice, s: &str) -> Result<usize, Exit> {
    let lit: SubgroupLiteral = s.parse().map_err(usage)?;
    l.resolve(&lit).map_err(usage)
}

fn show(l: &SubgroupLattice, i: usize) -> String {
    let labels: Vec<&str> = l.members(i).iter().map(|x| l.group().label(x)).collect();
    format!("#{i} (order {}) {{{}}}", l.subgroup_order(i), labels.join(", "))
}

fn show_set(l: &SubgroupLattice, s: ElementSet) -> String {
    let labels: Vec<&str> = s.iter().map(|x| l.group().label(x)).collect();
    format!("{{{}}}", labels.join(", "))
}

fn stuck(l: &SubgroupLattice, x: Option<usize>) -> String {
    x.map(|x| format!(" ({} has no separating topen)", l.group().label(x))).unwrap_or_default()
}

/// Splits `T1,T2` at commas that start a new descriptor, so `generated:#1,#2` stays whole.
fn split_factor_systems(s: &str) -> Vec<String> {
    let s = s.strip_prefix("toposys=").unwrap_or(s);
    let mut out: Vec<String> = Vec::new();
    for part in split_top_level(s) {
        let part = part.trim();
        match out.last_mut() {
            Some(prev) if !part.starts_with(|c: char| c.is_ascii_alphabetic()) => {
                prev.push(',');
                prev.push_str(part);
            }
            _ => out.push(part.to_string()),
        }
    }
    out
}

fn cmd_lattice(out: &mut Out, group: &str) -> Result<(), Exit> {
    let l = lattice_for(group)?;
    let subs: Vec<_> = (0..l.len()).map(|i| l.get(i)).collect();
    out.emit(json!({ "group": group, "subgroups": subs }), || {
        let mut lines = vec![format!("{group}: {} subgroups", l.len())];
        lines.extend((0..l.len()).map(|i| show(&l, i)));
        lines
    });
    Ok(())
}

fn cmd_toposys(out: &mut Out, cell: &CellArgs, verify: bool) -> Result<(), Exit> {
    let l = lattice_for(&cell.group)?;
    let d: TopoDescriptor = cell.sys.parse().map_err(usage)?;
    let t = match build_toposys(&l, &d) {
        Ok(t) => t,
        // generated systems always verify; a bad literal family can still violate the axioms
        Err(crate::toposys::ToposysError::Violation(v)) if verify => {
            out.emit(json!({ "group": cell.group, "toposys": cell.sys, "status": "fail", "violation": v }), || {
                vec![format!("FAIL {}", v)]
            });
            return Err(Exit(1, String::new()));
        }
        Err(e) => return Err(usage(e)),
    };
    let verdict = verify.then(|| verify_toposys(&l, t.members()));
    out.emit(
        json!({
            "group": cell.group,
            "toposys": t.descriptor(),
            "topens": t.topens(),
            "notes": t.notes(),
            "status": verdict.as_ref().map(|v| if v.is_ok() { "pass" } else { "fail" }),
        }),
        || {
            let mut lines = vec![format!("{} on {}: {} topens", t.descriptor(), cell.group, t.len())];
            lines.extend(t.topens().into_iter().map(|a| format!("  {}", show(&l, a))));
            lines.extend(t.notes().iter().map(|n| format!("note: {n}")));
            match &verdict {
                Some(Ok(())) => lines.push("PASS".into()),
                Some(Err(v)) => lines.push(format!("FAIL {v}")),
                None => {}
            }
            lines
        },
    );
    match verdict {
        Some(Err(_)) => Err(Exit(1, String::new())),
        _ => Ok(()),
    }
}

fn cmd_closure(out: &mut Out, cell: &CellArgs, x: &str) -> Result<(), Exit> {
    let t = system_for(cell)?;
    let l = t.lattice().clone();
    let x = subgroup(&l, x)?;
    let (interior, boundary) = t.interior_boundary(x).map_err(failed)?;
    let (limits, closure) = t.closure_and_limits(x).map_err(failed)?;
    let closed = t.t_closed_checks(x).map_err(failed)?;
    let closure_closed = t.t_closed_checks(closure).map_err(failed)?;
    out.emit(
        json!({
            "subgroup": x, "interior": interior, "boundary": boundary,
            "limit_points": limits, "closure": closure, "t_closed": closed,
            "closure_t_closed": closure_closed.t_closed, "closure_witness": closure_closed.t_closed_witness,
        }),
        || {
            vec![
                format!("subgroup  {}", show(&l, x)),
                format!("interior  {}", show(&l, interior)),
                format!("boundary  {}", show_set(&l, boundary)),
                format!("limits    {}", show_set(&l, limits)),
                format!("closure   {}", show(&l, closure)),
                format!("T-closed  {}{}", closed.t_closed, stuck(&l, closed.t_closed_witness)),
                format!("weak      {}{}", closed.weak_t_closed, stuck(&l, closed.weak_witness)),
                format!("closure T-closed {}{}", closure_closed.t_closed, stuck(&l, closure_closed.t_closed_witness)),
            ]
        },
    );
    Ok(())
}

fn cmd_hausdorff(out: &mut Out, cell: &CellArgs) -> Result<(), Exit> {
    let t = system_for(cell)?;
    let r = t.is_hausdorff();
    let g = t.lattice().group().clone();
    out.emit(json!(r), || {
        let mut lines = vec![format!("hausdorff {} ({} cyclically distinct pairs)", r.hausdorff, r.pairs_checked)];
        if let Some(w) = &r.witness {
            lines.push(format!("inseparable: {} and {}", g.label(w.x), g.label(w.y)));
        }
        lines
    });
    Ok(())
}

fn cmd_cover(out: &mut Out, cell: &CellArgs, x: Option<&str>, cover: Option<&str>) -> Result<(), Exit> {
    let t = system_for(cell)?;
    let l = t.lattice().clone();
    let x = match x {
        Some(s) => subgroup(&l, s)?,
        None => l.top(),
    };
    let cover = match cover {
        Some(c) => split_top_level(c).into_iter().map(|s| subgroup(&l, s)).collect::<Result<Vec<_>, _>>()?,
        None => t.topens(),
    };
    match t.find_finite_subcover(x, &cover).map_err(usage)? {
        Some(c) => {
            out.emit(json!(c), || {
                let mut lines = vec![format!("subcover of {} ({})", show(&l, x), if c.exact { "minimal" } else { "greedy" })];
                lines.extend(c.subcover.iter().map(|&a| format!("  {}", show(&l, a))));
                lines
            });
            Ok(())
        }
        None => {
            out.emit(json!({ "target": x, "subcover": Value::Null }), || vec!["the given topens do not cover the subgroup".into()]);
            Err(Exit(1, String::new()))
        }
    }
}

fn filter_for(l: &Arc<SubgroupLattice>, s: &str) -> Result<SubgroupFilter, Exit> {
    let lit: FilterLiteral = s.parse().map_err(usage)?;
    lit.resolve(l).map_err(failed)
}

fn cmd_filters(out: &mut Out, group: &str, filter: Option<&str>) -> Result<(), Exit> {
    let l = lattice_for(group)?;
    match filter {
        None => {
            let ultra = enumerate_ultrafilters(&l).map_err(failed)?;
            let gens: Vec<Option<usize>> = ultra.iter().map(|u| u.principal_generator()).collect();
            out.emit(
                json!({
                    "group": group,
                    "ultrafilters": ultra.iter().zip(&gens).map(|(u, g)| json!({ "generator": g, "members": u.indices() })).collect::<Vec<_>>(),
                    "note": "every subgroup ultrafilter of a finite group is principal (derived lemma)",
                }),
                || {
                    let mut lines = vec![format!("{group}: {} ultrafilters", ultra.len())];
                    for (u, g) in ultra.iter().zip(&gens) {
                        let g = g.map(|x| l.group().label(x).to_string()).unwrap_or_default();
                        lines.push(format!("  F_{g} = {:?}", u.indices()));
                    }
                    lines
                },
            );
        }
        Some(s) => {
            let f = filter_for(&l, s)?;
            let ultra = f.is_ultrafilter();
            let ext = f.extend_to_ultrafilter();
            out.emit(
                json!({
                    "filter": f.indices(), "kernel": f.kernel(), "ultrafilter": ultra.is_ok(),
                    "coverable_member": ultra.err(), "extension": ext.indices(),
                }),
                || {
                    vec![
                        format!("members   {:?}", f.indices()),
                        format!("kernel    {}", show(&l, f.kernel())),
                        match ultra {
                            Ok(()) => "ultra     true".into(),
                            Err(c) => format!("ultra     false (#{c} is a union of non-members)"),
                        },
                        format!("extension {:?}", ext.indices()),
                    ]
                },
            );
        }
    }
    Ok(())
}

fn cmd_converge(out: &mut Out, cell: &CellArgs, filter: &str, point: Option<usize>) -> Result<(), Exit> {
    let t = system_for(cell)?;
    let l = t.lattice().clone();
    let f = filter_for(&l, filter)?;
    let g = l.group().clone();
    match point {
        Some(y) => {
            if y >= g.order() {
                return Err(usage(format!("point {y} is not an element of {}", cell.group)));
            }
            let c = f.converges_to(&t, y).map_err(failed)?;
            out.emit(json!(c), || {
                vec![format!(
                    "converges to {}: {} (topens checked {:?}, first missing {:?})",
                    g.label(y),
                    c.converges,
                    c.checked_topens,
                    c.failing_topen
                )]
            });
        }
        None => {
            let set = f.convergence_set(&t).map_err(failed)?;
            let pair = set.cyclically_distinct_pair(&l);
            out.emit(json!({ "limits": set, "cyclically_distinct_pair": pair }), || {
                let classes: Vec<String> = set.classes.iter().map(|c| show_set(&l, *c)).collect();
                let mut lines = vec![format!("limits {}", show_set(&l, set.points)), format!("classes {}", classes.join(" "))];
                if let Some((x, y)) = pair {
                    lines.push(format!("cyclically distinct limits {} and {}", g.label(x), g.label(y)));
                }
                lines.push("the identity is never a limit: the trivial subgroup is topen and never a member".into());
                lines
            });
        }
    }
    Ok(())
}

fn cmd_product(out: &mut Out, group: &str, sys: &str, filter: Option<&str>) -> Result<(), Exit> {
    let d: GroupDescriptor = group.parse().map_err(usage)?;
    let GroupDescriptor::Product(fs) = &d else {
        return Err(usage(format!("`{group}` is not a product(..) descriptor")));
    };
    let names = split_factor_systems(sys);
    if names.len() != fs.len() {
        return Err(usage(format!("{} factors but {} factor systems", fs.len(), names.len())));
    }
    let factors = fs
        .iter()
        .map(|f| build_group(f, DEFAULT_ORDER_CAP).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let product = Arc::new(direct_product(factors, DEFAULT_ORDER_CAP).map_err(usage)?);
    let lattice = Arc::new(SubgroupLattice::enumerate(product.group().clone()));
    let mut systems = Vec::new();
    let mut factor_lattices = Vec::new();
    for (g, n) in product.factors().iter().zip(&names) {
        let fl = Arc::new(SubgroupLattice::enumerate(g.clone()));
        let td: TopoDescriptor = n.parse().map_err(usage)?;
        systems.push(build_toposys(&fl, &td).map_err(usage)?);
        factor_lattices.push(fl);
    }
    let p = product_toposys(product.clone(), lattice.clone(), systems).map_err(failed)?;
    let identities = product_identities_check(&product, &lattice, &factor_lattices).map_err(failed)?;
    let filters = match filter {
        Some(s) => vec![filter_for(&lattice, s)?],
        None => enumerate_ultrafilters(&lattice).map_err(failed)?,
    };
    let mut certificates = Vec::new();
    let mut first_failure = None;
    for f in &filters {
        match tychonoff_certificate(&p, f) {
            Ok(c) => certificates.push(json!(c)),
            Err(e) => {
                certificates.push(json!({ "filter": f.indices(), "error": e.to_string() }));
                first_failure.get_or_insert(e.to_string());
            }
        }
    }
    let ok = identities.failure.is_none() && first_failure.is_none();
    #[derive(Serialize)]
    struct Report<'a> {
        group: &'a str,
        factor_systems: &'a [String],
        topens: Vec<usize>,
        identities: &'a crate::product::IdentityReport,
        certificates: &'a [Value],
        status: &'a str,
    }
    let report = Report {
        group,
        factor_systems: &names,
        topens: p.system.topens(),
        identities: &identities,
        certificates: &certificates,
        status: if ok { "pass" } else { "fail" },
    };
    out.emit(json!(report), || {
        let mut lines = vec![
            format!("{group} with {}: {} topens of {} subgroups", names.join(" x "), p.system.len(), lattice.len()),
            format!("product identities: {} pairs, {}", identities.pairs_checked, if identities.failure.is_none() { "ok" } else { "FAILED" }),
            format!("compactness certificates: {} of {} filters", filters.len() - usize::from(first_failure.is_some()), filters.len()),
        ];
        if let Some(e) = &first_failure {
            lines.push(format!("FAIL {e}"));
        }
        lines
    });
    if ok {
        Ok(())
    } else {
        Err(Exit(1, String::new()))
    }
}

fn cmd_theorems(out: &mut Out, args: &TheoremArgs, format: OutputFormat) -> Result<i32, Exit> {
    let mut config = SuiteConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        config.apply_file(&text).map_err(usage)?;
    }
    if format == OutputFormat::Json {
        config.format = Format::Json;
    }
    if let Some(n) = args.max_order {
        config.max_group_order = n;
    }
    if let Some(n) = args.max_product_order {
        config.max_product_order = n;
    }
    if !args.suites.is_empty() {
        config.suites = args.suites.clone();
    }
    if !args.groups.is_empty() {
        config.set("groups", &args.groups.join(";")).map_err(usage)?;
    }
    if !args.systems.is_empty() {
        config.set("systems", &args.systems.join(";")).map_err(usage)?;
    }
    config.timings |= args.timings;
    let reports = run_suite(&config).map_err(usage)?;
    let summary = Summary::of(&reports);
    for r in &reports {
        match config.format {
            Format::Json => {
                let _ = writeln!(out.w, "{}", serde_json::to_string(r).expect("reports serialize"));
            }
            Format::Text => {
                let _ = writeln!(out.w, "{r}");
            }
        }
    }
    if config.format == Format::Text {
        let _ = writeln!(out.w, "{summary}");
    }
    Ok(summary.exit_code())
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run_command<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // --help and --version come through here too
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 2;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    let json = cli.format == OutputFormat::Json;
    let mut out = Out { w: stdout, json };
    let result = match &cli.command {
        Command::Lattice { group } => cmd_lattice(&mut out, group).map(|_| 0),
        Command::Toposys { cell, verify } => cmd_toposys(&mut out, cell, *verify).map(|_| 0),
        Command::Closure { cell, subgroup } => cmd_closure(&mut out, cell, subgroup).map(|_| 0),
        Command::Hausdorff { cell } => cmd_hausdorff(&mut out, cell).map(|_| 0),
        Command::Cover { cell, subgroup, cover } => {
            cmd_cover(&mut out, cell, subgroup.as_deref(), cover.as_deref()).map(|_| 0)
        }
        Command::Filters { group, filter } => cmd_filters(&mut out, group, filter.as_deref()).map(|_| 0),
        Command::Converge { cell, filter, point } => cmd_converge(&mut out, cell, filter, *point).map(|_| 0),
        Command::Product { group, sys, filter } => cmd_product(&mut out, group, sys, filter.as_deref()).map(|_| 0),
        Command::Theorems(args) => cmd_theorems(&mut out, args, cli.format),
    };
    match result {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            if !msg.is_empty() {
                let _ = writeln!(stderr, "error: {msg}");
            }
            code
        }
    }
}
