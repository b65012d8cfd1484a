//! Declarative code specifications.
//!
//! ```toml
//! [group]
//! kind = "dihedral"   # or "cyclic" with `order`, or "table"
//! n = 3
//!
//! [complex]
//! base = [["1+r+r^2", "s"], ["1", "r+r^2"]]
//! fiber = [["1", "r"], ["s", "1"]]
//!
//! [twists]
//! identity = true
//!
//! [options]
//! weight_cap = 6
//! ```
//!
//! The `[twists]` section holds exactly one of `identity = true`, a
//! `[[twists.per_column]]` list, a `per_entry` table shaped like `base`, or a
//! `[twists.connection]` assignment.

use std::ops::Range;
use std::sync::Arc;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use toml::Spanned;
use twistcode_core::{
    connection_from_group, parse_element, AlgElem, FiberAction, Group, RMatrix, TransposeMode,
    Twist, TwistData, DEFAULT_WEIGHT_CAP,
};

use crate::error::SpecError;

type MatrixLit = Vec<Vec<Spanned<String>>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    group: RawGroup,
    complex: RawComplex,
    twists: Option<RawTwists>,
    #[serde(default)]
    options: RawOptions,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    kind: Spanned<String>,
    order: Option<Spanned<usize>>,
    n: Option<Spanned<usize>>,
    element_names: Option<Vec<Spanned<String>>>,
    mul_table: Option<Vec<Vec<Spanned<String>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    base: MatrixLit,
    fiber: MatrixLit,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTwists {
    identity: Option<Spanned<bool>>,
    per_column: Option<Spanned<Vec<RawTwist>>>,
    per_entry: Option<Spanned<Vec<Vec<RawTwist>>>>,
    connection: Option<Spanned<RawConnection>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTwist {
    phi1: Option<MatrixLit>,
    phi0: Option<MatrixLit>,
    right: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConnection {
    action: Option<Spanned<String>>,
    assignment: Vec<Vec<Spanned<String>>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    weight_cap: Option<usize>,
    budget: Option<u64>,
    full_enumeration: Option<bool>,
    allow_nonflat: Option<bool>,
    lp_transpose: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPool {
    twist: Vec<Spanned<RawTwist>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwistSpec {
    Identity,
    PerColumn(Vec<Twist>),
    /// Indexed `[vertex][generator]`, the same shape as the base matrix.
    PerEntry(Vec<Vec<Twist>>),
    Connection {
        assignment: Vec<Vec<Option<usize>>>,
        action: FiberAction,
    },
}

impl TwistSpec {
    pub fn mode(&self) -> &'static str {
        match self {
            TwistSpec::Identity => "identity",
            TwistSpec::PerColumn(_) => "per_column",
            TwistSpec::PerEntry(_) => "per_entry",
            TwistSpec::Connection { .. } => "connection",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecOptions {
    pub weight_cap: usize,
    pub budget: Option<u64>,
    pub full_enumeration: bool,
    pub allow_nonflat: bool,
    pub lp_transpose: TransposeMode,
}

impl Default for SpecOptions {
    fn default() -> Self {
        Self {
            weight_cap: DEFAULT_WEIGHT_CAP,
            budget: None,
            full_enumeration: false,
            allow_nonflat: false,
            lp_transpose: TransposeMode::Plain,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CodeSpec {
    pub group: Arc<Group>,
    pub base: RMatrix,
    pub fiber: RMatrix,
    pub twists: TwistSpec,
    pub options: SpecOptions,
    /// SHA-256 of the spec text.
    pub digest: [u8; 32],
}

impl CodeSpec {
    /// `(ℓ, m, n, p, q)`: group order, base generators and vertices, fiber
    /// degree-1 and degree-0 dimensions.
    pub fn dims(&self) -> (usize, usize, usize, usize, usize) {
        let (n, m) = self.base.shape();
        let (q, p) = self.fiber.shape();
        (self.group.order(), m, n, p, q)
    }

    pub fn digest_hex(&self) -> String {
        hex::encode(self.digest)
    }

    /// Seed for randomized procedures when none is supplied.
    pub fn derived_seed(&self) -> u64 {
        u64::from_le_bytes(self.digest[..8].try_into().unwrap())
    }

    pub fn twist_data(&self) -> twistcode_core::Result<TwistData> {
        let (_, m, n, p, q) = self.dims();
        match &self.twists {
            TwistSpec::Identity => Ok(TwistData::identity(&self.group, m, p, q)),
            TwistSpec::PerColumn(t) => TwistData::per_column(&self.group, p, q, t.clone()),
            TwistSpec::PerEntry(rows) => {
                let table = (0..m)
                    .map(|j| (0..n).map(|i| rows[i][j].clone()).collect())
                    .collect();
                TwistData::per_entry(&self.group, n, p, q, table)
            }
            TwistSpec::Connection { assignment, action } => {
                connection_from_group(&self.base, &self.fiber, assignment, *action)
            }
        }
    }
}

struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn line(&self, offset: usize) -> usize {
        let offset = offset.min(self.text.len());
        self.text[..offset].bytes().filter(|&b| b == b'\n').count() + 1
    }

    /// Name of the last `[header]` at or before `offset`.
    fn section(&self, offset: usize) -> Option<String> {
        let offset = offset.min(self.text.len());
        self.text[..offset].lines().rev().find_map(|l| {
            let t = l.trim();
            let t = t
                .strip_prefix("[[")
                .and_then(|t| t.strip_suffix("]]"))
                .or_else(|| t.strip_prefix('[').and_then(|t| t.split(']').next()))?;
            Some(t.trim().to_string())
        })
    }

    fn err(
        &self,
        span: Range<usize>,
        token: Option<&str>,
        message: impl Into<String>,
    ) -> SpecError {
        SpecError {
            section: self.section(span.start),
            line: Some(self.line(span.start)),
            token: token.map(str::to_string),
            message: message.into(),
        }
    }

    fn toml_err(&self, e: toml::de::Error) -> SpecError {
        let span = e.span();
        SpecError {
            section: span.as_ref().and_then(|s| self.section(s.start)),
            line: span.as_ref().map(|s| self.line(s.start)),
            token: span
                .as_ref()
                .map(|s| self.text[s.clone()].trim().to_string())
                .filter(|t| !t.is_empty() && t.len() <= 60),
            message: e.message().trim().to_string(),
        }
    }
}

fn bare(section: &str, message: impl Into<String>) -> SpecError {
    SpecError {
        section: Some(section.to_string()),
        line: None,
        token: None,
        message: message.into(),
    }
}

fn parse_entry(
    src: &Source,
    group: &Arc<Group>,
    s: &Spanned<String>,
) -> Result<AlgElem, SpecError> {
    parse_element(group, s.get_ref()).map_err(|e| {
        src.err(
            s.span(),
            Some(if e.token.is_empty() {
                s.get_ref()
            } else {
                &e.token
            }),
            format!("{} in `{}`", e.message, s.get_ref()),
        )
    })
}

fn parse_matrix(
    src: &Source,
    group: &Arc<Group>,
    lit: &MatrixLit,
    what: &str,
    section: &str,
) -> Result<RMatrix, SpecError> {
    let width = lit.first().map_or(0, Vec::len);
    if lit.is_empty() || width == 0 {
        return Err(bare(section, format!("{what} must be a non-empty matrix")));
    }
    let mut rows = Vec::with_capacity(lit.len());
    for (r, row) in lit.iter().enumerate() {
        if row.len() != width {
            let span = row.first().map(Spanned::span).unwrap_or(0..0);
            return Err(src.err(
                span,
                None,
                format!(
                    "ragged {what}: row {r} has {} entries, expected {width}",
                    row.len()
                ),
            ));
        }
        rows.push(
            row.iter()
                .map(|s| parse_entry(src, group, s))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(RMatrix::from_rows(group, rows).expect("rectangular rows over one group"))
}

fn parse_group(src: &Source, raw: &RawGroup) -> Result<Arc<Group>, SpecError> {
    let kind = raw.kind.get_ref().as_str();
    let param = |field: &Option<Spanned<usize>>, name: &str| -> Result<Spanned<usize>, SpecError> {
        field.clone().ok_or_else(|| {
            src.err(
                raw.kind.span(),
                Some(kind),
                format!("kind `{kind}` needs `{name}`"),
            )
        })
    };
    let built = match kind {
        "cyclic" => {
            let order = param(&raw.order, "order")?;
            Group::cyclic(*order.get_ref())
                .map_err(|e| src.err(order.span(), None, e.to_string()))?
        }
        "dihedral" => {
            let n = param(&raw.n, "n")?;
            Group::dihedral(*n.get_ref()).map_err(|e| src.err(n.span(), None, e.to_string()))?
        }
        "table" => {
            let names = raw.element_names.as_ref().ok_or_else(|| {
                src.err(
                    raw.kind.span(),
                    Some(kind),
                    "kind `table` needs `element_names`",
                )
            })?;
            let table = raw.mul_table.as_ref().ok_or_else(|| {
                src.err(
                    raw.kind.span(),
                    Some(kind),
                    "kind `table` needs `mul_table`",
                )
            })?;
            let lookup = |s: &Spanned<String>| {
                names
                    .iter()
                    .position(|n| n.get_ref() == s.get_ref())
                    .ok_or_else(|| {
                        src.err(s.span(), Some(s.get_ref()), "not one of `element_names`")
                    })
            };
            let rows = table
                .iter()
                .map(|row| row.iter().map(lookup).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let plain = names.iter().map(|n| n.get_ref().clone()).collect();
            Group::from_table(plain, rows)
                .map_err(|e| src.err(raw.kind.span(), None, e.to_string()))?
        }
        other => {
            return Err(src.err(
                raw.kind.span(),
                Some(other),
                "unknown group kind (expected cyclic, dihedral or table)",
            ))
        }
    };
    Ok(Arc::new(built))
}

fn parse_twist(
    src: &Source,
    group: &Arc<Group>,
    raw: &RawTwist,
    span: Range<usize>,
    (p, q): (usize, usize),
) -> Result<Twist, SpecError> {
    let section = "twists";
    match (&raw.phi1, &raw.phi0, &raw.right) {
        (Some(a), Some(b), None) => {
            let phi1 = parse_matrix(src, group, a, "phi1", section)?;
            let phi0 = parse_matrix(src, group, b, "phi0", section)?;
            for (m, name, d, lit) in [(&phi1, "phi1", p, a), (&phi0, "phi0", q, b)] {
                if m.shape() != (d, d) {
                    return Err(src.err(
                        lit[0][0].span(),
                        None,
                        format!("{name} is {}x{}, expected {d}x{d}", m.rows(), m.cols()),
                    ));
                }
            }
            Ok(Twist::Matrix { phi1, phi0 })
        }
        (None, None, Some(r)) => Ok(Twist::RightScalar(parse_entry(src, group, r)?)),
        _ => Err(src.err(
            span,
            None,
            "a twist needs both `phi1` and `phi0`, or only `right`",
        )),
    }
}

fn parse_action(src: &Source, raw: Option<&Spanned<String>>) -> Result<FiberAction, SpecError> {
    match raw {
        None => Ok(FiberAction::Left),
        Some(s) => match s.get_ref().as_str() {
            "left" => Ok(FiberAction::Left),
            "right" => Ok(FiberAction::Right),
            other => Err(src.err(s.span(), Some(other), "expected `left` or `right`")),
        },
    }
}

fn parse_twists(
    src: &Source,
    group: &Arc<Group>,
    raw: Option<&RawTwists>,
    (n, m, p, q): (usize, usize, usize, usize),
) -> Result<TwistSpec, SpecError> {
    let raw = raw.ok_or_else(|| bare("twists", "missing [twists] section"))?;
    let mut present: Vec<(&str, Range<usize>)> = Vec::new();
    if let Some(s) = &raw.identity {
        present.push(("identity", s.span()));
    }
    if let Some(s) = &raw.per_column {
        present.push(("per_column", s.span()));
    }
    if let Some(s) = &raw.per_entry {
        present.push(("per_entry", s.span()));
    }
    if let Some(s) = &raw.connection {
        present.push(("connection", s.span()));
    }
    present.sort_by_key(|(_, s)| s.start);
    match present.as_slice() {
        [] => return Err(bare("twists", "no twist mode given")),
        [_] => {}
        [(first, _), (second, span), ..] => {
            return Err(src.err(
                span.clone(),
                Some(second),
                format!("twist mode conflict: `{first}` and `{second}` are both present"),
            ))
        }
    }
    if let Some(flag) = &raw.identity {
        if !*flag.get_ref() {
            return Err(src.err(
                flag.span(),
                Some("false"),
                "`identity` may only be set to true",
            ));
        }
        return Ok(TwistSpec::Identity);
    }
    if let Some(list) = &raw.per_column {
        if list.get_ref().len() != m {
            return Err(src.err(
                list.span(),
                None,
                format!(
                    "per_column lists {} twists, base has {m} generators",
                    list.get_ref().len()
                ),
            ));
        }
        let twists = list
            .get_ref()
            .iter()
            .map(|t| parse_twist(src, group, t, list.span(), (p, q)))
            .collect::<Result<_, _>>()?;
        return Ok(TwistSpec::PerColumn(twists));
    }
    if let Some(table) = &raw.per_entry {
        let rows = table.get_ref();
        if rows.len() != n || rows.iter().any(|r| r.len() != m) {
            return Err(src.err(
                table.span(),
                None,
                format!("per_entry must be {n}x{m} like base"),
            ));
        }
        let twists = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|t| parse_twist(src, group, t, table.span(), (p, q)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        return Ok(TwistSpec::PerEntry(twists));
    }
    let conn = raw.connection.as_ref().expect("one mode present");
    let rc = conn.get_ref();
    let action = parse_action(src, rc.action.as_ref())?;
    if rc.assignment.len() != n || rc.assignment.iter().any(|r| r.len() != m) {
        return Err(src.err(
            conn.span(),
            None,
            format!("assignment must be {n}x{m} like base"),
        ));
    }
    let mut assignment = vec![vec![None; m]; n];
    for (i, row) in rc.assignment.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            if s.get_ref().trim() == "-" {
                continue;
            }
            let e = parse_entry(src, group, s)?;
            let g = e.as_group_element().ok_or_else(|| {
                src.err(
                    s.span(),
                    Some(s.get_ref()),
                    "connection entries must be single group elements",
                )
            })?;
            assignment[i][j] = Some(g);
        }
    }
    Ok(TwistSpec::Connection { assignment, action })
}

fn parse_options(src: &Source, raw: &RawOptions) -> Result<SpecOptions, SpecError> {
    let d = SpecOptions::default();
    let lp_transpose = match &raw.lp_transpose {
        None => d.lp_transpose,
        Some(s) => {
            parse_transpose(s.get_ref()).map_err(|m| src.err(s.span(), Some(s.get_ref()), m))?
        }
    };
    Ok(SpecOptions {
        weight_cap: raw.weight_cap.unwrap_or(d.weight_cap),
        budget: raw.budget,
        full_enumeration: raw.full_enumeration.unwrap_or(d.full_enumeration),
        allow_nonflat: raw.allow_nonflat.unwrap_or(d.allow_nonflat),
        lp_transpose,
    })
}

pub fn parse_transpose(s: &str) -> Result<TransposeMode, String> {
    match s {
        "plain" => Ok(TransposeMode::Plain),
        "antipode" => Ok(TransposeMode::Antipode),
        _ => Err("expected `plain` or `antipode`".to_string()),
    }
}

/// Parses and validates a code spec.
pub fn parse_code_spec(text: &str) -> Result<CodeSpec, SpecError> {
    let src = Source { text };
    let raw: RawSpec = toml::from_str(text).map_err(|e| src.toml_err(e))?;
    let group = parse_group(&src, &raw.group)?;
    let base = parse_matrix(&src, &group, &raw.complex.base, "base", "complex")?;
    let fiber = parse_matrix(&src, &group, &raw.complex.fiber, "fiber", "complex")?;
    let (n, m) = base.shape();
    let (q, p) = fiber.shape();
    let twists = parse_twists(&src, &group, raw.twists.as_ref(), (n, m, p, q))?;
    let options = parse_options(&src, &raw.options)?;
    Ok(CodeSpec {
        group,
        base,
        fiber,
        twists,
        options,
        digest: Sha256::digest(text.as_bytes()).into(),
    })
}

/// Parses a twist pool file: a list of `[[twist]]` tables, each with
/// `phi1`/`phi0` matrices or a `right` scalar.
pub fn parse_twist_pool(text: &str, spec: &CodeSpec) -> Result<Vec<Twist>, SpecError> {
    let src = Source { text };
    let raw: RawPool = toml::from_str(text).map_err(|e| src.toml_err(e))?;
    let (_, _, _, p, q) = spec.dims();
    raw.twist
        .iter()
        .map(|t| parse_twist(&src, &spec.group, t.get_ref(), t.span(), (p, q)))
        .collect()
}
