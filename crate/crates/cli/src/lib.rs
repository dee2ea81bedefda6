//! The `gradua` command line: parses JSON descriptions, runs one check and prints
//! a deterministic verdict report.
//!
//! Exit codes: 0 pass, 1 fail (the report carries a witness), 2 input error.

pub mod report;
pub mod input;

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use gradua::bundle::g_dual_bundle;
use gradua::characterization::{
    check_degree_k, check_double_graded, check_dvb, rank_m12, reconstruct, SymAlgData,
};
use gradua::coalgebra::{shuffle_coproduct, GradedCoalgebra};
use gradua::duality::{g_dual_space, k_alg_dual, roundtrip};
use gradua::rational::{frac, int};
use gradua::space::{check_intertwines_pointwise, Point, SampleGrid};
use gradua::superalg::{check_n_deg2, super_check_free};
use gradua::weil::{FreenessVerdict, PresentedGradedAlgebra};
use gradua::{Multidegree, RankVector, VariableTable};

use report::{q, qs, strings, Format, Report};
use input::{load, AlgebraInput, AtlasInput, DvbInput, InputError, InputResult, MapInput, NDeg2Input, SpaceInput};

#[derive(Debug, Parser)]
#[command(name = "gradua", version, about = "Exact checks for graded bundles, Weil algebras and their duals")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    pub format: Format,
    /// Include wall-clock time in the report (makes output non-deterministic).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graded spaces and maps between them.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// G-dual of a space, or k-dual of a free Weil algebra.
    Dualize(DualizeArgs),
    /// Double-dual round trip of a graded space.
    Roundtrip {
        #[arg(long)]
        space: String,
        #[arg(long)]
        order: u32,
    },
    /// Presented graded algebras.
    #[command(subcommand)]
    Weil(WeilCmd),
    /// Graded dual coalgebras.
    #[command(subcommand)]
    Coalg(CoalgCmd),
    /// Multi-chart graded bundle atlases.
    #[command(subcommand)]
    Bundle(BundleCmd),
    /// Rank-condition characterizations.
    Characterize(CharacterizeArgs),
    /// Super (N x Z2-graded) checks.
    #[command(subcommand)]
    Super(SuperCmd),
    /// Runs the acceptance suite (seed from GRADUA_SEED).
    Selftest,
}

#[derive(Debug, Subcommand)]
pub enum SpaceCmd {
    /// Weight-preservation and h_t-intertwining of a map V -> W.
    CheckMorphism {
        #[arg(long)]
        space: String,
        #[arg(long)]
        map: String,
    },
}

#[derive(Debug, Args)]
pub struct DualizeArgs {
    #[arg(long, conflicts_with = "algebra", required_unless_present = "algebra")]
    space: Option<String>,
    #[arg(long)]
    algebra: Option<String>,
    /// Truncation order for an algebra; the weight range listed for a space.
    #[arg(long)]
    order: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum WeilCmd {
    /// Freeness of order k, with a relation as witness when not free.
    CheckFree {
        #[arg(long)]
        algebra: String,
        /// Defaults to the algebra's own bound.
        #[arg(long)]
        order: Option<u32>,
    },
    /// Homogeneous generators extracted from the decomposables.
    Generators {
        #[arg(long)]
        algebra: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum CoalgCmd {
    /// Comultiplication of one dual basis element such as "Y[y,z]" ("Y[]" is the unit).
    Comul {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
    },
    /// Coassociativity, cocommutativity, counit and pairing laws.
    Axioms {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum BundleCmd {
    /// Transition weights and the cocycle law.
    Check {
        #[arg(long)]
        atlas: String,
    },
    /// Linearized transitions on new generators of each weight.
    Split {
        #[arg(long)]
        atlas: String,
    },
    /// Associated algebra bundle up to a weight.
    Dualize {
        #[arg(long)]
        atlas: String,
        #[arg(long, default_value_t = 2)]
        max_weight: u32,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct CharacterizeArgs {
    #[command(subcommand)]
    mode: Option<CharacterizeCmd>,
    #[arg(long)]
    data: Option<String>,
    #[arg(long)]
    order: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum CharacterizeCmd {
    /// E^{1,0} (x) E^{0,1} -> E^{1,1} injectivity and the core.
    Dvb {
        #[arg(long)]
        data: String,
    },
    /// Rebuilds the graded space from accepted data.
    Reconstruct {
        #[arg(long)]
        data: String,
        #[arg(long)]
        order: u32,
    },
    /// Image rank of m_{1,2} on the order-3 model, e.g. --rank 2,1,0.
    RankM12 {
        #[arg(long, value_delimiter = ',')]
        rank: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SuperCmd {
    /// Degree-2 N-manifold data: injectivity of the wedge map.
    CheckN2 {
        #[arg(long)]
        data: String,
    },
    /// Super freeness by dimension comparison.
    CheckFree {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        order: u32,
    },
}

/// Runs one command line; returns the exit code and the text to print.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let start = Instant::now();
    match execute(&cli.command) {
        Ok(mut r) => {
            if cli.timing {
                r.timing_ms = Some(start.elapsed().as_millis());
            }
            (r.exit_code(), r.render(cli.format))
        }
        Err(e) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&json!({ "error": e.to_string() })).expect("serializes"),
                Format::Text => format!("error: {e}\n"),
            };
            (2, text)
        }
    }
}

fn execute(cmd: &Command) -> InputResult<Report> {
    match cmd {
        Command::Space(SpaceCmd::CheckMorphism { space, map }) => check_morphism(space, map),
        Command::Dualize(a) => dualize(a),
        Command::Roundtrip { space, order } => roundtrip_cmd(space, *order),
        Command::Weil(WeilCmd::CheckFree { algebra, order }) => weil_check_free(algebra, *order),
        Command::Weil(WeilCmd::Generators { algebra }) => weil_generators(algebra),
        Command::Coalg(CoalgCmd::Comul { algebra, element, max_weight }) => comul(algebra, element, *max_weight),
        Command::Coalg(CoalgCmd::Axioms { algebra, max_weight }) => coalg_axioms(algebra, *max_weight),
        Command::Bundle(BundleCmd::Check { atlas }) => bundle_check(atlas),
        Command::Bundle(BundleCmd::Split { atlas }) => bundle_split(atlas),
        Command::Bundle(BundleCmd::Dualize { atlas, max_weight }) => bundle_dualize(atlas, *max_weight),
        Command::Characterize(a) => characterize(a),
        Command::Super(SuperCmd::CheckN2 { data }) => super_n2(data),
        Command::Super(SuperCmd::CheckFree { algebra, order }) => super_free(algebra, *order),
        Command::Selftest => selftest(),
    }
}

fn table_json(t: &VariableTable) -> Value {
    Value::Array(
        t.vars()
            .iter()
            .map(|v| json!({ "name": v.name, "weight": v.weight.to_string() }))
            .collect(),
    )
}

fn check_morphism(space: &str, map: &str) -> InputResult<Report> {
    let v = load::<SpaceInput>(space)?.space()?;
    let f = load::<MapInput>(map)?.map(v.table())?;
    let mut r = Report::new("space check-morphism");
    let violations = f.check_graded();
    let symbolic = f.check_intertwining_symbolic();
    r.set("weight_violations", strings(&violations));
    r.set("symbolic_mismatches", strings(&symbolic));
    if let Some(v) = violations.first() {
        r.fail(v.to_string());
    }
    let pointwise = check_intertwines_pointwise(&f, &SampleGrid::default())?;
    r.set("samples", pointwise.samples);
    r.set("exhaustive", pointwise.complete);
    if let Some(fail) = &pointwise.failure {
        if r.pass {
            r.fail(json!({
                "t": q(&fail.t),
                "point": qs(&fail.point.coords),
                "f(h_t P)": qs(&fail.lhs),
                "h_t f(P)": qs(&fail.rhs),
            }));
        }
    }
    Ok(r)
}

fn dualize(a: &DualizeArgs) -> InputResult<Report> {
    if let Some(space) = &a.space {
        let v = load::<SpaceInput>(space)?.space()?;
        let dual = g_dual_space(&v);
        let top = a.order.unwrap_or(4);
        let mut r = Report::new("dualize --space");
        r.set("generators", table_json(dual.table()));
        r.set("dimensions", json!(dual.dimensions_up_to(top)));
        return Ok(r);
    }
    let alg = load::<AlgebraInput>(a.algebra.as_deref().expect("clap requires one source"))?.algebra()?;
    let alg = bounded(&alg, a.order)?;
    let mut r = Report::new("dualize --algebra");
    let verdict = alg.check_free_in_box()?;
    if let Some(w) = &verdict.witness {
        r.set("rank_vector", verdict.rank_vector.entries().to_vec());
        r.fail(json!({ "relation": w.relation.to_string(), "weight": w.weight.to_string() }));
        return Ok(r);
    }
    let kd = k_alg_dual(&alg)?;
    r.set("rank_vector", kd.space.rank().entries().to_vec());
    r.set("coordinates", table_json(kd.space.table()));
    Ok(r)
}

fn bounded(alg: &PresentedGradedAlgebra, order: Option<u32>) -> InputResult<PresentedGradedAlgebra> {
    match order {
        Some(k) if alg.bound().len() == 1 => Ok(alg.with_bound(&[k])?),
        Some(_) => Err(InputError::Invalid("--order applies to N-graded algebras only".into())),
        None => Ok(alg.clone()),
    }
}

fn roundtrip_cmd(space: &str, order: u32) -> InputResult<Report> {
    let v = load::<SpaceInput>(space)?.space()?;
    let n = v.dim();
    let points = vec![
        v.origin(),
        Point::new(vec![int(1); n]),
        Point::new((0..n).map(|i| int(i as i64 + 1)).collect()),
        Point::new((0..n).map(|i| frac(if i % 2 == 0 { -2 } else { 3 }, i as i64 + 1)).collect()),
    ];
    let ts = [int(0), int(1), int(-1), int(2), frac(1, 2)];
    let rt = roundtrip(&v, order, &points, &ts)?;
    let mut r = Report::new("roundtrip");
    r.set("rank_preserved", rt.rank_preserved)
        .set("ev_identity", rt.ev_identity)
        .set("equivariant", rt.equivariant)
        .set("truncation_agrees", rt.truncation_agrees)
        .set("free_k_dual", rt.free_k_dual);
    if !rt.pass() {
        let failed: Vec<&str> = [
            ("rank_preserved", rt.rank_preserved),
            ("ev_identity", rt.ev_identity),
            ("equivariant", rt.equivariant),
            ("truncation_agrees", rt.truncation_agrees),
            ("free_k_dual", rt.free_k_dual),
        ]
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| *n)
        .collect();
        r.fail(json!({ "failed_checks": failed }));
    }
    Ok(r)
}

fn freeness_report(r: &mut Report, v: &FreenessVerdict) {
    r.set("free", v.free);
    r.set("rank_vector", v.rank_vector.entries().to_vec());
    r.set("generators", table_json(&v.generators.table));
    r.set(
        "dimensions",
        Value::Array(
            v.dimensions
                .iter()
                .map(|d| json!({ "weight": d.weight.to_string(), "algebra": d.algebra, "model": d.model }))
                .collect(),
        ),
    );
    if let Some(w) = &v.witness {
        r.fail(json!({ "relation": w.relation.to_string(), "weight": w.weight.to_string() }));
    }
}

fn weil_check_free(algebra: &str, order: Option<u32>) -> InputResult<Report> {
    let alg = load::<AlgebraInput>(algebra)?.algebra()?;
    let alg = bounded(&alg, order)?;
    let mut r = Report::new("weil check-free");
    let v = alg.check_free_in_box()?;
    freeness_report(&mut r, &v);
    Ok(r)
}

fn weil_generators(algebra: &str) -> InputResult<Report> {
    let alg = load::<AlgebraInput>(algebra)?.algebra()?;
    let space = alg.extract_generators()?;
    let mut r = Report::new("weil generators");
    r.set("rank_vector", space.table.rank_vector().entries().to_vec());
    r.set(
        "generators",
        Value::Array(
            space
                .generators
                .iter()
                .map(|g| {
                    json!({
                        "name": g.name,
                        "weight": alg.component_weight(g.component).to_string(),
                        "parity": g.parity.name(),
                        "lift": qs(&g.lift.coords),
                    })
                })
                .collect(),
        ),
    );
    Ok(r)
}

fn parse_element(text: &str, table: &VariableTable) -> InputResult<Multidegree> {
    let inner = text
        .trim()
        .strip_prefix("Y[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| InputError::Invalid(format!("element `{text}` must look like Y[a,b]")))?;
    let mut idx = Vec::new();
    for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let i = table
            .index_of(name)
            .ok_or_else(|| InputError::Invalid(format!("unknown variable `{name}` in element")))?;
        idx.push(i);
    }
    idx.sort_unstable();
    Ok(Multidegree::from_indices(&idx))
}

fn label(m: &Multidegree, table: &VariableTable) -> String {
    let names: Vec<String> = m.indices().map(|i| table.var(i).name.clone()).collect();
    format!("Y[{}]", names.join(","))
}

fn comul(algebra: &str, element: &str, max_weight: u32) -> InputResult<Report> {
    let table = load::<SpaceInput>(algebra)?.table()?;
    let md = parse_element(element, &table)?;
    let co = GradedCoalgebra::graded_dual(&table, max_weight);
    let terms = co.comultiply_monomial(&md)?;
    let mut r = Report::new("coalg comul");
    r.set("element", label(&md, &table));
    r.set(
        "terms",
        Value::Array(
            terms
                .iter()
                .map(|(a, b, c)| json!({ "left": label(a, &table), "right": label(b, &table), "coeff": q(c) }))
                .collect(),
        ),
    );
    let distinct = md.max_exponent() <= 1;
    if distinct {
        let mut lhs = terms.clone();
        let mut rhs = shuffle_coproduct(&md);
        lhs.sort();
        rhs.sort();
        r.set("matches_shuffle_formula", lhs == rhs);
        if lhs != rhs {
            r.fail("comultiplication differs from the shuffle sum");
        }
    }
    Ok(r)
}

fn coalg_axioms(algebra: &str, max_weight: u32) -> InputResult<Report> {
    let raw: Value = load(algebra)?;
    let is_presented = ["mu", "dims", "components", "order", "bound"]
        .iter()
        .any(|k| raw.get(k).is_some());
    let alg = if is_presented {
        load::<AlgebraInput>(algebra)?.algebra()?
    } else {
        let table = load::<SpaceInput>(algebra)?.table()?;
        gradua::weil::TruncatedAlgebra::new(table, max_weight).to_presented()
    };
    let co = GradedCoalgebra::dualize_structure(&alg);
    let mut r = Report::new("coalg axioms");
    r.set("dims", co.dims().to_vec());
    match co.check_axioms() {
        Ok(()) => {
            r.set("axioms", true);
        }
        Err(v) => {
            r.set("axioms", false);
            r.fail(v.to_string());
        }
    }
    match co.check_pairing(&alg) {
        Ok(()) => {
            r.set("pairing", true);
        }
        Err((c, a, b)) => {
            r.set("pairing", false);
            if r.pass {
                r.fail(json!({ "c": [c.0, c.1], "a": [a.0, a.1], "b": [b.0, b.1] }));
            }
        }
    }
    Ok(r)
}

fn bundle_check(atlas: &str) -> InputResult<Report> {
    let at = load::<AtlasInput>(atlas)?.atlas()?;
    Ok(atlas_report(&at, "bundle check")?.0)
}

/// Weight and cocycle checks; the flag says whether derived constructions may proceed.
fn atlas_report(at: &gradua::bundle::GradedBundleAtlas, command: &str) -> InputResult<(Report, bool)> {
    let mut r = Report::new(command);
    let violations = at.check_transition_weights();
    r.set("weight_violations", strings(&violations));
    if let Some(v) = violations.first() {
        r.fail(v.to_string());
    }
    let cocycle = at.check_cocycle()?;
    r.set("triples_checked", cocycle.triples_checked);
    r.set("linear", at.is_linear());
    if let Some(f) = &cocycle.failure {
        if r.pass {
            r.fail(json!({
                "triple": [f.triple.0, f.triple.1, f.triple.2],
                "component": f.component,
                "discrepancy": f.discrepancy,
            }));
        }
    }
    let ok = r.pass;
    Ok((r, ok))
}

fn block_json(at_charts: &[String], blocks: &std::collections::BTreeMap<(usize, usize), Vec<gradua::bundle::PolyMatrix>>, weights: &[u32]) -> Value {
    Value::Array(
        blocks
            .iter()
            .map(|(&(to, from), bs)| {
                let per: Vec<Value> = bs
                    .iter()
                    .zip(weights)
                    .map(|(b, w)| {
                        json!({
                            "weight": w,
                            "matrix": b.to_rows().iter().map(|row| strings(row)).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                json!({ "from": at_charts[from], "to": at_charts[to], "blocks": per })
            })
            .collect(),
    )
}

fn bundle_split(atlas: &str) -> InputResult<Report> {
    let at = load::<AtlasInput>(atlas)?.atlas()?;
    let (mut r, ok) = atlas_report(&at, "bundle split")?;
    if !ok {
        return Ok(r);
    }
    let split = at.split_form()?;
    r.set("rank_vector", split.rank.entries().to_vec());
    r.set("transitions", block_json(at.charts(), &split.blocks, &split.weights));
    r.set("cocycle", split.cocycle.pass());
    if let Some(f) = &split.cocycle.failure {
        r.fail(f.to_string());
    }
    Ok(r)
}

fn bundle_dualize(atlas: &str, max_weight: u32) -> InputResult<Report> {
    let at = load::<AtlasInput>(atlas)?.atlas()?;
    let (mut r, ok) = atlas_report(&at, "bundle dualize")?;
    if !ok {
        return Ok(r);
    }
    let d = g_dual_bundle(&at, max_weight)?;
    r.set("dims", d.dims());
    let weights: Vec<u32> = (0..=max_weight).collect();
    r.set("pullbacks", block_json(at.charts(), &d.algebra.blocks, &weights));
    r.set("cocycle", d.cocycle.pass());
    if let Some(f) = &d.cocycle.failure {
        r.fail(f.to_string());
    }
    Ok(r)
}

fn sym_data(arg: &str) -> InputResult<SymAlgData> {
    Ok(SymAlgData::from_algebra(load::<AlgebraInput>(arg)?.algebra()?)?)
}

fn characterize(a: &CharacterizeArgs) -> InputResult<Report> {
    match &a.mode {
        Some(CharacterizeCmd::Dvb { data }) => {
            let d = load::<DvbInput>(data)?.data()?;
            let v = check_dvb(&d);
            let bigraded = check_double_graded(&d.to_bigraded()?, 1, 1)?;
            let mut r = Report::new("characterize dvb");
            r.set("rank", v.rank)
                .set("core_dim", v.core_dim())
                .set("core", Value::Array(v.core.iter().map(|c| qs(c)).collect()))
                .set("rank_nullity", v.rank_nullity)
                .set("bigraded_free", bigraded.free);
            if !v.accepted {
                let kernel = d.tensor_matrix().kernel();
                r.fail(json!({ "kernel_vector": kernel.first().map(|k| qs(k)), "tensor_map_rank": v.rank }));
            }
            Ok(r)
        }
        Some(CharacterizeCmd::Reconstruct { data, order }) => {
            let m = sym_data(data)?;
            let mut r = Report::new("characterize reconstruct");
            match reconstruct(&m, *order) {
                Ok(rec) => {
                    r.set("rank_vector", rec.rank_vector.entries().to_vec())
                        .set("coordinates", table_json(rec.space.table()))
                        .set("structure_recovered", rec.structure_recovered)
                        .set("charts", strings(rec.atlas.charts()));
                    if !rec.structure_recovered {
                        r.fail("re-dualized structure constants differ from the input");
                    }
                }
                Err(gradua::Error::NotFree { witness }) => {
                    r.fail(json!({ "relation": witness }));
                }
                Err(e) => return Err(e.into()),
            }
            Ok(r)
        }
        Some(CharacterizeCmd::RankM12 { rank }) => {
            let v = rank_m12(&RankVector::new(rank.clone()));
            let mut r = Report::new("characterize rank-m12");
            r.set("brute_force", v.brute_force)
                .set("rank_vector_formula", v.rank_vector_formula)
                .set("literal_formula", v.literal_formula)
                .set("literal_matches", v.literal_matches());
            if v.brute_force != v.rank_vector_formula {
                r.fail(json!({ "brute_force": v.brute_force, "formula": v.rank_vector_formula }));
            }
            Ok(r)
        }
        None => {
            let (Some(data), Some(order)) = (&a.data, a.order) else {
                return Err(InputError::Invalid("characterize needs --data and --order".into()));
            };
            let m = sym_data(data)?;
            let v = check_degree_k(&m, order)?;
            let mut r = Report::new("characterize");
            r.set("accepted", v.accepted)
                .set("oracle_free", v.oracle_free)
                .set("oracle_agrees", v.oracle_agrees())
                .set(
                    "induced_maps",
                    Value::Array(
                        v.checks
                            .iter()
                            .map(|c| json!({ "j": c.j, "rank": c.rank, "domain_dim": c.domain_dim, "well_defined": c.well_defined }))
                            .collect(),
                    ),
                );
            if let Some(rv) = &v.rank_vector {
                r.set("rank_vector", rv.entries().to_vec());
            }
            if !v.accepted {
                let w = match (&v.axioms, &v.witness) {
                    (Some(a), _) => json!({ "axiom": a.to_string() }),
                    (None, Some(p)) => json!({ "relation": p.to_string() }),
                    (None, None) => json!({ "induced_maps": "not injective" }),
                };
                r.fail(w);
            }
            Ok(r)
        }
    }
}

fn super_n2(data: &str) -> InputResult<Report> {
    let d = load::<NDeg2Input>(data)?.data()?;
    let v = check_n_deg2(&d)?;
    let mut r = Report::new("super check-n2");
    r.set("rank", v.rank)
        .set("wedge_dim", v.wedge_dim)
        .set("dual_surjective", v.dual_surjective)
        .set("super_free", v.super_free)
        .set("oracle_agrees", v.oracle_agrees());
    if !v.injective {
        r.fail(json!({ "kernel_vector": v.witness.as_deref().map(qs) }));
    }
    Ok(r)
}

fn super_free(algebra: &str, order: u32) -> InputResult<Report> {
    let alg = load::<AlgebraInput>(algebra)?.algebra()?;
    let v = super_check_free(&alg, order)?;
    let mut r = Report::new("super check-free");
    r.set("free", v.free)
        .set("rank", v.rank.to_string())
        .set(
            "dimensions",
            Value::Array(
                v.dimensions
                    .iter()
                    .map(|(w, a, m)| json!({ "weight": w, "algebra": a, "model": m }))
                    .collect(),
            ),
        );
    if !v.free {
        r.fail(json!({ "relation": v.witness.map(|p| p.to_string()) }));
    }
    Ok(r)
}

fn selftest() -> InputResult<Report> {
    let seed = match std::env::var("GRADUA_SEED") {
        Ok(s) => s
            .parse::<u64>()
            .map_err(|_| InputError::Invalid(format!("GRADUA_SEED `{s}` is not an integer")))?,
        Err(_) => gradua_acceptance::DEFAULT_SEED,
    };
    let outcomes = gradua_acceptance::run_all(seed);
    let mut r = Report::new("selftest");
    r.set("seed", seed);
    r.set(
        "criteria",
        Value::Array(outcomes.iter().map(|o| Value::String(o.line())).collect()),
    );
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    if !failed.is_empty() {
        r.fail(json!({ "failed_criteria": failed }));
    }
    Ok(r)
}
