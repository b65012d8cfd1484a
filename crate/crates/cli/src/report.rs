//! Pipeline orchestration and deterministic JSON reports.
//!
//! Reports are `serde_json::Value` trees; objects are key-sorted maps, so
//! serialization is byte-stable for identical inputs.

use serde_json::{json, Value};
use twistcode_core::{
    assemble_css, build_twisted_complex, check_flatness, lifted_product_hz_literal, min_distance,
    verify_chain_iso, CssCode, DistanceEquality, DistanceMethod, DistanceOptions, DistanceResult,
    Error, FlatnessReport, IsoReport, SideDistance, TotalComplex, TransposeMode, TwistData,
};

use crate::error::CliError;
use crate::spec::{CodeSpec, TwistSpec};

pub const TOOL_NAME: &str = "twistcode";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A serialized report plus the verdict that decides the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub value: Value,
    pub css_ok: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        to_json(&self.value)
    }
}

pub fn to_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// The twisted complex of a spec, built up to (not including) CSS assembly.
pub struct Pipeline {
    pub twists: TwistData,
    pub flatness: FlatnessReport,
    pub total: TotalComplex,
}

impl Pipeline {
    /// Fails with the per-generator flatness report unless the spec allows
    /// non-flat twists.
    pub fn build(spec: &CodeSpec) -> Result<Self, CliError> {
        let twists = spec.twist_data()?;
        let flatness = check_flatness(&spec.fiber, &twists)?;
        let total =
            build_twisted_complex(&spec.base, &spec.fiber, &twists, spec.options.allow_nonflat)?;
        Ok(Self {
            twists,
            flatness,
            total,
        })
    }

    /// The CSS code, or the number of nonzero entries in `H_X H_Z^T`.
    pub fn code(&self) -> Result<Result<CssCode, usize>, CliError> {
        match assemble_css(&self.total) {
            Ok(code) => Ok(Ok(code)),
            Err(Error::CssViolation { nonzero, .. }) => Ok(Err(nonzero)),
            Err(e) => Err(e.into()),
        }
    }
}

pub fn distance_options(spec: &CodeSpec) -> DistanceOptions {
    DistanceOptions {
        weight_cap: spec.options.weight_cap,
        budget: spec.options.budget,
        full_enumeration: spec.options.full_enumeration,
    }
}

fn transpose_name(mode: TransposeMode) -> &'static str {
    match mode {
        TransposeMode::Plain => "plain",
        TransposeMode::Antipode => "antipode",
    }
}

fn side_json(side: &SideDistance, cap: usize) -> (Value, bool, Value) {
    let witness = side.witness().map_or(Value::Null, |w| json!(w.support()));
    let d = match side {
        SideDistance::Exact { d, .. } => json!(d),
        SideDistance::AboveCap { .. } => json!(format!("> {cap}")),
        SideDistance::NoLogicals => json!("none"),
        SideDistance::Unresolved { searched_up_to } => {
            json!(format!(
                "unresolved (complete through weight {searched_up_to})"
            ))
        }
    };
    (d, side.is_exact(), witness)
}

pub fn distance_json(result: &DistanceResult) -> Value {
    let (d_x, exact_x, witness_x) = side_json(&result.x, result.weight_cap);
    let (d_z, exact_z, witness_z) = side_json(&result.z, result.weight_cap);
    json!({
        "cap": result.weight_cap,
        "d": result.d(),
        "d_x": d_x,
        "d_z": d_z,
        "exact_x": exact_x,
        "exact_z": exact_z,
        "method": match result.method {
            DistanceMethod::BoundedSearch => "bounded_search",
            DistanceMethod::FullEnumeration => "full_enumeration",
        },
        "witness_x": witness_x,
        "witness_z": witness_z,
    })
}

pub fn flatness_json(report: &FlatnessReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({"generator": c.generator, "vertex": c.vertex, "flat": c.flat}))
        .collect();
    json!({"flat": report.flat, "checks": checks})
}

pub fn iso_json(iso: &IsoReport) -> Value {
    json!({
        "applicable": iso.applicable,
        "per_column": iso.per_column,
        "invertible_per_twist": iso.invertible,
        "square_d1": iso.square_d1,
        "square_d2": iso.square_d2,
        "squares_commute": iso.squares_commute(),
        "ranks_equal": iso.ranks_equal(),
        "twisted_ranks": {"d1": iso.twisted.d1, "d2": iso.twisted.d2},
        "untwisted_ranks": {"d1": iso.untwisted.d1, "d2": iso.untwisted.d2},
        "monomial_per_twist": iso.monomial,
        "distance_equality": match iso.distance_equality {
            DistanceEquality::Certified => "certified",
            DistanceEquality::Uncertified => "uncertified",
            DistanceEquality::NotApplicable => "not_applicable",
        },
    })
}

fn code_json(code: &CssCode, distance: Option<&DistanceResult>) -> Value {
    let p = code.parameters();
    let mut v = json!({
        "css_ok": true,
        "n": p.n,
        "k": p.k,
        "rank_hx": p.rank_hx,
        "rank_hz": p.rank_hz,
    });
    if let Some(d) = distance {
        v["distance"] = distance_json(d);
    }
    v
}

fn header(spec: &CodeSpec) -> Value {
    let (ell, m, n, p, q) = spec.dims();
    json!({
        "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
        "input_sha256": spec.digest_hex(),
        "dims": {"ell": ell, "m": m, "n": n, "p": p, "q": q},
    })
}

fn lifted_product_json(spec: &CodeSpec, code: Option<&CssCode>) -> Result<Value, CliError> {
    let mode = spec.options.lp_transpose;
    let hz = lifted_product_hz_literal(&spec.base, &spec.fiber, mode)?;
    let hx = spec_hx(spec)?;
    let nonzero = hx.mul(&hz.transpose())?.count_ones();
    Ok(json!({
        "transpose": transpose_name(mode),
        "css_ok": nonzero == 0,
        "nonzero": nonzero,
        "matches_complex": code.map(|c| *c.hz() == hz),
    }))
}

fn spec_hx(spec: &CodeSpec) -> Result<twistcode_core::BinMatrix, CliError> {
    let (_, m, _, p, q) = spec.dims();
    let untwisted = TwistData::identity(&spec.group, m, p, q);
    Ok(build_twisted_complex(&spec.base, &spec.fiber, &untwisted, false)?.expand_d1())
}

/// Full report: flatness, parameters, distances, isomorphism checks and the
/// untwisted baseline.
pub fn run_report(spec: &CodeSpec) -> Result<Report, CliError> {
    let pipeline = Pipeline::build(spec)?;
    let options = distance_options(spec);
    let mut report = header(spec);
    report["options"] = json!({
        "allow_nonflat": spec.options.allow_nonflat,
        "budget": spec.options.budget,
        "full_enumeration": spec.options.full_enumeration,
        "lp_transpose": transpose_name(spec.options.lp_transpose),
        "weight_cap": spec.options.weight_cap,
    });
    report["twists"] = json!({
        "mode": spec.twists.mode(),
        "identity": pipeline.twists.is_identity(),
    });
    report["flatness"] = flatness_json(&pipeline.flatness);
    report["invertibility"] = pipeline
        .twists
        .iter()
        .map(|(generator, vertex, t)| {
            json!({"generator": generator, "vertex": vertex, "invertible": t.is_invertible()})
        })
        .collect();

    let code = pipeline.code()?;
    let css_ok = code.is_ok();
    match &code {
        Ok(code) => {
            let distance = min_distance(code, &options);
            report["css"] = code_json(code, Some(&distance));
            let (hx, hz) = code.check_weights();
            report["check_weights"] = json!({"max_row_weight_hx": hx, "max_row_weight_hz": hz});
        }
        Err(nonzero) => {
            report["css"] = json!({"css_ok": false, "nonzero": nonzero});
            report["check_weights"] = Value::Null;
        }
    }

    report["iso"] = iso_json(&verify_chain_iso(
        &spec.base,
        &spec.fiber,
        &pipeline.twists,
    )?);

    report["untwisted"] = if pipeline.twists.is_identity() {
        report["css"].clone()
    } else {
        let (_, m, _, p, q) = spec.dims();
        let identity = TwistData::identity(&spec.group, m, p, q);
        let code = assemble_css(&build_twisted_complex(
            &spec.base,
            &spec.fiber,
            &identity,
            false,
        )?)?;
        code_json(&code, Some(&min_distance(&code, &options)))
    };

    report["lifted_product"] = if matches!(spec.twists, TwistSpec::Identity) {
        lifted_product_json(spec, code.as_ref().ok())?
    } else {
        Value::Null
    };

    Ok(Report {
        value: report,
        css_ok,
    })
}

/// Flatness only; a non-flat verdict is a report outcome, not an error.
pub fn check_flat_report(spec: &CodeSpec) -> Result<Value, CliError> {
    let twists = spec.twist_data()?;
    let mut report = header(spec);
    report["flatness"] = flatness_json(&check_flatness(&spec.fiber, &twists)?);
    Ok(report)
}

pub fn distance_report(spec: &CodeSpec) -> Result<Report, CliError> {
    let pipeline = Pipeline::build(spec)?;
    let mut report = header(spec);
    let css_ok = match pipeline.code()? {
        Ok(code) => {
            report["css"] = code_json(&code, Some(&min_distance(&code, &distance_options(spec))));
            true
        }
        Err(nonzero) => {
            report["css"] = json!({"css_ok": false, "nonzero": nonzero});
            false
        }
    };
    Ok(Report {
        value: report,
        css_ok,
    })
}

pub fn iso_report(spec: &CodeSpec) -> Result<Value, CliError> {
    let twists = spec.twist_data()?;
    let mut report = header(spec);
    report["iso"] = iso_json(&verify_chain_iso(&spec.base, &spec.fiber, &twists)?);
    Ok(report)
}
