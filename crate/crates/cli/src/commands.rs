//! Dispatch of a [`RunConfig`] to the library and assembly of the document.

use std::fmt::Write as _;

use motsheaf_core::bounds::{hilb_strata_bounds, strata_bounds, BoundEntry, BoundReport};
use motsheaf_core::decomposition::{s_param, s_param_restricted, SParam};
use motsheaf_core::hilb::{hilb_euler_capped, hilb_poincare_capped};
use motsheaf_core::hypotheses::{HypothesisReport, RhoSource};
use motsheaf_core::motivic::{virtual_betti_capped, VirtualBettiReport};
use motsheaf_core::{DivisorClass, Error, Surface};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{CommandKind, Grid, RunConfig};
use crate::document::{big, latex_betti_rows, Document};
use crate::error::CliError;

/// A rendered document together with the exit status it carries.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: Document,
    /// 0 on success, 2 when the request is outside the hypotheses, 3 when an
    /// audit fails.
    pub status: u8,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(document: Document) -> Self {
        Outcome {
            document,
            status: 0,
            diagnostics: Vec::new(),
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let surface: Surface = config
        .surface
        .parse()
        .map_err(|e: Error| CliError::Parse(e.to_string()))?;
    let class = || -> Result<DivisorClass, CliError> {
        let coords = config
            .class
            .as_ref()
            .ok_or_else(|| CliError::Parse(format!("{} needs a class", config.command.name())))?;
        let l = DivisorClass::from_coords(coords).map_err(|e| CliError::Parse(e.to_string()))?;
        surface.check(&l).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(l)
    };
    let chi = || {
        config
            .chi
            .ok_or_else(|| CliError::Parse(format!("{} needs --chi", config.command.name())))
    };
    match config.command {
        CommandKind::Check => check(&surface, &class()?, config.chi),
        CommandKind::Betti => betti(&surface, &class()?, chi()?, config.max_points),
        CommandKind::Hilb => {
            let n = config
                .points
                .ok_or_else(|| CliError::Parse("hilb needs --n".into()))?;
            hilb(&surface, n, config.euler, config.max_points)
        }
        CommandKind::SParam => s_param_doc(&surface, &class()?, config.restricted),
        CommandKind::Audit => audit(&surface, &class()?, config.chi, config.max_points),
        CommandKind::Table => {
            let grid = config
                .grid
                .as_ref()
                .ok_or_else(|| CliError::Parse("table needs a grid".into()))?;
            table(&surface, grid, config.max_points)
        }
    }
}

fn class_json(l: &DivisorClass) -> Value {
    json!(l.coords())
}

fn sparam_json(sp: &SParam) -> Value {
    match sp {
        SParam::Finite { value, witness } => json!({
            "value": value,
            "witness": witness.parts().iter().map(class_json).collect::<Vec<_>>(),
        }),
        SParam::Infinite => json!({ "value": "inf", "witness": null }),
    }
}

fn rho_source(s: RhoSource) -> &'static str {
    match s {
        RhoSource::Table => "table",
        RhoSource::ConservativeMinimum => "conservative-minimum",
    }
}

fn report_json(r: &HypothesisReport) -> Value {
    json!({
        "surface": r.surface.id(),
        "class": class_json(&r.class),
        "chi": r.chi,
        "self_intersection": r.self_intersection,
        "canonical_degree": r.canonical_degree,
        "genus": r.genus,
        "kx_negative": r.kx_negative,
        "has_integral_member": r.has_integral,
        "multiplicity": r.multiplicity,
        "primitive_class": class_json(&r.primitive_class),
        "s_l": sparam_json(&r.s_l),
        "l_plus_k": class_json(&r.l_plus_k),
        "s_l_plus_k": r.s_l_plus_k.as_ref().map(sparam_json),
        "l_plus_k_nonpositive": r.l_plus_k_nonpositive,
        "condition": r.condition.condition.map(|c| c.label()),
        "condition_evidence": r.condition.evidence,
        "rho": r.rho.map(|x| x.value),
        "rho_source": r.rho.map(|x| rho_source(x.source)),
        "main_applicable": r.main_applicable,
        "refusal": r.refusal,
        "irreducibility": r.irreducibility.label(),
        "fine_moduli": r.fine_moduli,
        "rationality": r.rationality.map(|x| x.label()),
        "strictly_semistable_note": r.strictly_semistable_note,
        "moduli_empty": r.moduli_empty,
    })
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Object(m) if m.contains_key("value") => {
            let mut s = scalar_text(&m["value"]);
            if let Some(Value::Array(w)) = m.get("witness") {
                let parts: Vec<String> = w.iter().map(scalar_text).collect();
                let _ = write!(s, " [{}]", parts.join(" + "));
            }
            s
        }
        Value::Array(a) => format!("({})", a.iter().map(scalar_text).collect::<Vec<_>>().join(",")),
        other => other.to_string(),
    }
}

fn key_value_document(json: Value, title: String) -> Document {
    let rows: Vec<Vec<String>> = json
        .as_object()
        .map(|m| m.iter().map(|(k, v)| vec![k.clone(), scalar_text(v)]).collect())
        .unwrap_or_default();
    let mut text = title;
    text.push('\n');
    let width = rows.iter().map(|r| r[0].len()).max().unwrap_or(0);
    for r in &rows {
        let _ = writeln!(text, "  {:width$}  {}", r[0], r[1]);
    }
    Document {
        json,
        columns: vec!["field".into(), "value".into()],
        rows,
        text,
        latex: None,
    }
}

fn check(s: &Surface, l: &DivisorClass, chi: Option<i64>) -> Result<Outcome, CliError> {
    let r = HypothesisReport::evaluate(s, l, chi)?;
    let mut title = format!("{s} L = {l}");
    if let Some(c) = chi {
        let _ = write!(title, " chi = {c}");
    }
    Ok(Outcome::ok(key_value_document(report_json(&r), title)))
}

fn pairs(v: &[(i64, BigUint)]) -> Value {
    Value::Array(v.iter().map(|(i, b)| json!([i, big(b)])).collect())
}

pub fn betti_json(r: &VirtualBettiReport) -> Value {
    let n = &r.normalization;
    let sh = &r.shift;
    let rho = r.hypotheses.rho.expect("applicable report has rho");
    let mut hodge: Vec<Value> = r
        .hodge_low()
        .iter()
        .chain(r.hodge_high().iter())
        .map(|(p, h)| json!([p, p, big(h)]))
        .collect();
    hodge.dedup();
    json!({
        "input": {
            "surface": r.surface.id(),
            "class": class_json(&r.class),
            "chi": r.chi,
        },
        "normalization": {
            "chi_in": n.chi_in,
            "modulus": n.modulus,
            "canonical_degree": n.canonical_degree,
            "rho": n.rho,
            "rho_source": rho_source(rho.source),
            "candidates": n.candidates,
            "chi0": n.chi0,
            "window_value": n.window_value,
        },
        "shift": {
            "dtilde": sh.dtilde,
            "shift_m": sh.shift_m,
            "top_degree": sh.top_degree,
            "scheme_valid_codim": sh.scheme_valid_codim,
            "valid_degree_min": sh.valid_degree_min,
        },
        "valid_degree_min": sh.valid_degree_min,
        "raw_high": pairs(&r.raw_high),
        "reflected_low": pairs(&r.reflected_low),
        "hodge": hodge,
        "flags": {
            "fine_moduli": r.flags.fine_moduli,
            "smoothness_assumed": r.flags.smoothness_assumed,
            "strictly_semistable_note": r.flags.strictly_semistable_note,
            "rationality": r.flags.rationality.label(),
            "irreducibility": r.hypotheses.irreducibility.label(),
            "condition": r.hypotheses.condition.condition.map(|c| c.label()),
        },
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn betti_text(r: &VirtualBettiReport) -> String {
    let n = &r.normalization;
    let sh = &r.shift;
    let mut t = String::new();
    let _ = writeln!(t, "{} L = {} chi = {}", r.surface, r.class, r.chi);
    let _ = writeln!(
        t,
        "chi0 = {} (modulus {}, rho {}, window {})",
        n.chi0, n.modulus, n.rho, n.window_value
    );
    let _ = writeln!(
        t,
        "dtilde = {}, m = {}, top degree {}, controlled degrees >= {}",
        sh.dtilde, sh.shift_m, sh.top_degree, sh.valid_degree_min
    );
    let fine = match r.flags.fine_moduli {
        Some(b) => yes_no(b),
        None => "n/a",
    };
    let _ = writeln!(
        t,
        "fine moduli {fine}, smoothness assumed {}, strictly semistable {}, {}",
        yes_no(r.flags.smoothness_assumed),
        yes_no(r.flags.strictly_semistable_note),
        r.flags.rationality.label()
    );
    match r.reflected_max() {
        Some(max) => {
            let _ = writeln!(t, "reflected Betti numbers, degrees 0..{max}:");
            for (i, b) in &r.reflected_low {
                let _ = writeln!(t, "  b_{i} = {b}");
            }
        }
        None => {
            let _ = writeln!(t, "reflected Betti numbers: none controlled");
        }
    }
    let _ = writeln!(
        t,
        "virtual Betti numbers, degrees {}..{}:",
        sh.valid_degree_min.max(0),
        sh.top_degree
    );
    for (i, b) in &r.raw_high {
        let _ = writeln!(t, "  b_{i} = {b}");
    }
    let _ = writeln!(t, "h^(p,q) = b_(p+q) if p = q and 0 otherwise, on both ranges");
    t
}

fn betti(s: &Surface, l: &DivisorClass, chi: i64, cap: usize) -> Result<Outcome, CliError> {
    let r = virtual_betti_capped(s, l, chi, cap)?;
    let rows = r
        .reflected_low
        .iter()
        .map(|(i, b)| vec!["reflected".into(), i.to_string(), b.to_string()])
        .chain(
            r.raw_high
                .iter()
                .map(|(i, b)| vec!["virtual".into(), i.to_string(), b.to_string()]),
        )
        .collect();
    let latex = latex_betti_rows("b_i", &r.reflected_low);
    Ok(Outcome::ok(Document {
        json: betti_json(&r),
        columns: vec!["range".into(), "degree".into(), "betti".into()],
        rows,
        text: betti_text(&r),
        latex: Some(latex),
    }))
}

fn hilb(s: &Surface, n: usize, euler: bool, cap: usize) -> Result<Outcome, CliError> {
    let p = hilb_poincare_capped(s, n, cap)?;
    let e = hilb_euler_capped(s, n, cap)?;
    let coeffs: Vec<(i64, BigUint)> = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, b)| (i as i64, b.clone()))
        .collect();
    let text = if euler {
        format!("{e}\n")
    } else {
        let joined: Vec<String> = p.coeffs().iter().map(BigUint::to_string).collect();
        format!("{}\n", joined.join(","))
    };
    Ok(Outcome::ok(Document {
        json: json!({
            "surface": s.id(),
            "n": n,
            "dim": p.dim(),
            "betti": p.coeffs().iter().map(big).collect::<Vec<_>>(),
            "euler": big(&e),
        }),
        columns: vec!["degree".into(), "betti".into()],
        rows: coeffs.iter().map(|(i, b)| vec![i.to_string(), b.to_string()]).collect(),
        text,
        latex: Some(latex_betti_rows("b_i", &coeffs)),
    }))
}

fn s_param_doc(s: &Surface, l: &DivisorClass, restricted: bool) -> Result<Outcome, CliError> {
    let sp = if restricted {
        s_param_restricted(s, l)?
    } else {
        s_param(s, l)?
    };
    let witness = sp.witness().map(|w| w.to_string()).unwrap_or_default();
    Ok(Outcome::ok(Document {
        json: json!({
            "surface": s.id(),
            "class": class_json(l),
            "restricted": restricted,
            "s": sparam_json(&sp),
        }),
        columns: vec!["surface".into(), "class".into(), "s".into(), "witness".into()],
        rows: vec![vec![s.id().into(), l.to_string(), sp.to_string(), witness]],
        text: format!("{sp}\n"),
        latex: None,
    }))
}

fn entry_json(e: &BoundEntry) -> Value {
    json!({
        "name": e.name,
        "formula": e.formula,
        "applicable": e.applicable,
        "value": e.value,
        "limit": e.limit,
        "within_limit": e.within_limit(),
    })
}

fn bounds_json(r: &BoundReport) -> Value {
    json!({
        "entries": r.entries.iter().map(entry_json).collect::<Vec<_>>(),
        "ambient_stack": r.ambient_stack,
        "ambient_scheme": r.ambient_scheme,
        "claimed": r.claimed,
        "audit": r.audit,
        "moduli_empty": r.moduli_empty,
    })
}

fn opt(v: Option<i64>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

fn audit(s: &Surface, l: &DivisorClass, chi: Option<i64>, cap: usize) -> Result<Outcome, CliError> {
    let sheaf = strata_bounds(s, l, chi.unwrap_or(1))?;
    let hilbert = match chi {
        Some(c) => match virtual_betti_capped(s, l, c, cap) {
            Ok(r) => Some(hilb_strata_bounds(
                s,
                l,
                r.normalization.chi0,
                r.normalization.rho,
            )?),
            Err(Error::Inapplicable(_)) => None,
            Err(e) => return Err(e.into()),
        },
        None => None,
    };

    let mut text = format!("{s} L = {l}: ambient dimension {}", sheaf.ambient_stack);
    match sheaf.claimed {
        Some(c) => {
            let _ = writeln!(text, ", claimed bound {c}");
        }
        None => text.push_str(", no codimension clause applies\n"),
    }
    let mut rows = Vec::new();
    for (side, report) in [("sheaf", Some(&sheaf)), ("hilbert", hilbert.as_ref())] {
        let Some(report) = report else { continue };
        for e in &report.entries {
            let mark = match (e.applicable, e.within_limit()) {
                (false, _) => "n/a",
                (true, true) => "ok",
                (true, false) => "EXCEEDS",
            };
            let _ = writeln!(
                text,
                "  {:<9} {:<28} {:>6} <= {:<6} {mark:<7} {}",
                format!("[{side}]"),
                e.name,
                opt(e.value),
                opt(e.limit),
                e.formula
            );
            rows.push(vec![
                side.to_string(),
                e.name.clone(),
                e.applicable.to_string(),
                opt(e.value),
                opt(e.limit),
                e.formula.clone(),
            ]);
        }
    }
    let passed = sheaf.audit.unwrap_or(false) && hilbert.as_ref().is_none_or(|h| h.audit == Some(true));
    let verdict = match sheaf.audit {
        None => "inapplicable",
        Some(_) if passed => "pass",
        Some(_) => "FAIL",
    };
    let _ = writeln!(text, "audit: {verdict}");

    let mut json = Map::new();
    json.insert("surface".into(), s.id().into());
    json.insert("class".into(), class_json(l));
    json.insert("chi".into(), json!(chi));
    json.insert("sheaf".into(), bounds_json(&sheaf));
    json.insert("hilbert".into(), hilbert.as_ref().map_or(Value::Null, bounds_json));
    json.insert("audit".into(), verdict.into());

    let mut outcome = Outcome::ok(Document {
        json: Value::Object(json),
        columns: ["side", "name", "applicable", "value", "limit", "formula"]
            .map(String::from)
            .to_vec(),
        rows,
        text,
        latex: None,
    });
    match sheaf.audit {
        None => {
            outcome.status = 2;
            outcome.diagnostics.push(format!("{l}: no codimension clause applies"));
        }
        Some(_) if !passed => {
            outcome.status = 3;
            outcome.diagnostics.push(format!("{l}: a bound exceeds its limit"));
        }
        Some(_) => {}
    }
    Ok(outcome)
}

pub const TABLE_COLUMNS: [&str; 13] = [
    "surface",
    "class",
    "chi",
    "status",
    "rho",
    "chi0",
    "dtilde",
    "shift_m",
    "window",
    "valid_degree_min",
    "reflected_max",
    "reflected_low",
    "detail",
];

enum Cell {
    Row(Vec<String>),
    Broken(String),
}

fn grid_classes(s: &Surface, grid: &Grid) -> Vec<DivisorClass> {
    if s.is_plane() {
        grid.first.values().map(DivisorClass::plane).collect()
    } else {
        let second = grid.second.unwrap_or(grid.first);
        grid.first
            .values()
            .flat_map(|a| second.values().map(move |b| DivisorClass::hirzebruch(a, b)))
            .collect()
    }
}

fn table_cell(s: &Surface, l: &DivisorClass, chi: i64, cap: usize) -> Cell {
    let head = vec![s.id().to_string(), l.to_string(), chi.to_string()];
    let row = |status: &str, rest: Vec<String>, detail: String| {
        let mut r = head.clone();
        r.push(status.into());
        r.extend(rest);
        r.push(detail);
        Cell::Row(r)
    };
    let blank = || vec![String::new(); 8];
    match virtual_betti_capped(s, l, chi, cap) {
        Ok(r) => {
            let n = &r.normalization;
            let low: Vec<String> = r.reflected_low.iter().map(|(_, b)| b.to_string()).collect();
            row(
                "ok",
                vec![
                    n.rho.to_string(),
                    n.chi0.to_string(),
                    r.shift.dtilde.to_string(),
                    r.shift.shift_m.to_string(),
                    n.window_value.to_string(),
                    r.shift.valid_degree_min.to_string(),
                    opt(r.reflected_max()),
                    low.join(" "),
                ],
                String::new(),
            )
        }
        Err(e) => match CliError::from(e) {
            CliError::Invariant(why) => Cell::Broken(format!("{l} chi {chi}: {why}")),
            CliError::Inapplicable(why) => row("inapplicable", blank(), why),
            other => row("error", blank(), other.to_string()),
        },
    }
}

fn table(s: &Surface, grid: &Grid, cap: usize) -> Result<Outcome, CliError> {
    let cells: Vec<(DivisorClass, i64)> = grid_classes(s, grid)
        .into_iter()
        .flat_map(|l| grid.chis.iter().map(move |&chi| (l, chi)))
        .collect();
    let results: Vec<Cell> = cells
        .par_iter()
        .map(|(l, chi)| table_cell(s, l, *chi, cap))
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut broken = Vec::new();
    for cell in results {
        match cell {
            Cell::Row(r) => rows.push(r),
            Cell::Broken(why) => broken.push(why),
        }
    }
    if !broken.is_empty() {
        return Err(CliError::Invariant(broken.join("; ")));
    }

    let columns: Vec<String> = TABLE_COLUMNS.map(String::from).to_vec();
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            Value::Object(
                columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.clone(), Value::String(v.clone())))
                    .collect(),
            )
        })
        .collect();
    let mut text = String::new();
    for r in &rows {
        let _ = writeln!(text, "{}", r.join("\t"));
    }
    Ok(Outcome::ok(Document {
        json: json!({ "columns": columns, "rows": json_rows }),
        columns,
        rows,
        text,
        latex: None,
    }))
}
