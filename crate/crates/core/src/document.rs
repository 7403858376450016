//! JSON problem documents and the analysis reports produced from them.
//!
//! A report is the expanded document (catalog references resolved, Galois
//! generators merged into `root_datum`) plus an `analysis` object, so it can
//! be fed back in as a document and reproduces itself byte for byte.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::form::{derive_b1, derive_b2, dual_root_datum, sharp_root_datum, B1Table, B2Pairing, MetaplecticForm};
use crate::lattice::{FgAbGroup, IntMatrix};
use crate::local_field::{genuine_character_obstruction, kummer_f_table, GenuineTable, LocalField};
use crate::obstruction::{
    build_gamma, format_coset, solutions_in_window, solve_obstruction, GammaSequence, ObstructionReport,
};
use crate::root_datum::{catalog_spec, derive, BasedRootDatum, CatalogSpec, DerivedLattices, GaloisAction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DocError {
    Io(String),
    Json(String),
    Invalid(String),
}

impl DocError {
    pub fn exit_code(&self) -> i32 {
        match self {
            DocError::Io(_) | DocError::Json(_) => 1,
            DocError::Invalid(_) => 2,
        }
    }
}

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DocError::Io(m) => write!(f, "I/O error: {m}"),
            DocError::Json(m) => write!(f, "malformed JSON: {m}"),
            DocError::Invalid(m) => write!(f, "invalid document: {m}"),
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> DocError {
    DocError::Invalid(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<CatalogSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_datum: Option<RootDatumDoc>,
    /// Extra Galois generators (rows), applied on top of the datum's own.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub galois_generators: Vec<Vec<Vec<i64>>>,
    pub form: FormDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genuine_character: Option<GenuineDoc>,
    /// Present in reports; ignored on input.
    #[serde(default, skip_serializing)]
    pub analysis: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootDatumDoc {
    pub rank: usize,
    pub simple_coroots: Vec<Vec<i64>>,
    pub simple_roots: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub galois_generators: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub q_basis: Vec<i64>,
    #[serde(default)]
    pub b_offdiag: Vec<Vec<i64>>,
    #[serde(default)]
    pub cyclotomic_trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstructionDoc {
    pub chi: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenuineDoc {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<Vec<u64>>,
    pub eps: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_table: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_kummer: Option<KummerDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KummerDoc {
    pub c: String,
}

pub fn parse_document(text: &str) -> Result<ProblemDocument, DocError> {
    serde_json::from_str(text)
        .map_err(|e| DocError::Json(format!("line {}, column {}: {e}", e.line(), e.column())))
}

pub fn load_document(path: &std::path::Path) -> Result<ProblemDocument, DocError> {
    let text = std::fs::read_to_string(path).map_err(|e| DocError::Io(format!("{}: {e}", path.display())))?;
    parse_document(&text)
}

/// A document with its catalog reference expanded and its data validated.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub datum: BasedRootDatum,
    pub action: GaloisAction,
    pub form: MetaplecticForm,
    pub document: ProblemDocument,
}

fn matrix_rows(m: &[Vec<i64>], n: usize, what: &str) -> Result<IntMatrix, DocError> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(DocError::Invalid(format!("{what} must be a {n}x{n} matrix")));
    }
    Ok(IntMatrix::from_rows(m, n))
}

fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("entry fits in i64")
}

fn rows_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(to_i64).collect()).collect()
}

fn cols_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.col_vectors().iter().map(|c| c.iter().map(to_i64).collect()).collect()
}

pub fn datum_doc(datum: &BasedRootDatum, action: &[IntMatrix]) -> RootDatumDoc {
    RootDatumDoc {
        rank: datum.rank(),
        simple_coroots: cols_i64(datum.coroots()),
        simple_roots: rows_i64(datum.roots()),
        galois_generators: action.iter().map(rows_i64).collect(),
        name: datum.name.clone(),
    }
}

pub fn resolve(doc: &ProblemDocument) -> Result<Resolved, DocError> {
    let (datum, mut gens) = match (&doc.catalog, &doc.root_datum) {
        (Some(spec), None) => {
            let (d, a) = catalog_spec(spec).map_err(invalid)?;
            (d, a.generators().to_vec())
        }
        (None, Some(rd)) => {
            let d = BasedRootDatum::new(rd.rank, &rd.simple_coroots, &rd.simple_roots, rd.name.clone())
                .map_err(invalid)?;
            let gens = rd
                .galois_generators
                .iter()
                .map(|m| matrix_rows(m, rd.rank, "Galois generator"))
                .collect::<Result<Vec<_>, _>>()?;
            (d, gens)
        }
        (Some(_), Some(_)) => return Err(DocError::Invalid("give either catalog or root_datum, not both".into())),
        (None, None) => return Err(DocError::Invalid("missing catalog or root_datum".into())),
    };
    datum.ensure_valid().map_err(invalid)?;
    for m in &doc.galois_generators {
        gens.push(matrix_rows(m, datum.rank(), "Galois generator")?);
    }
    let action = GaloisAction::new(&datum, gens).map_err(invalid)?;

    let f = &doc.form;
    if f.q_basis.len() != datum.rank() {
        return Err(DocError::Invalid(format!(
            "form.q_basis has {} entries, datum has rank {}",
            f.q_basis.len(),
            datum.rank()
        )));
    }
    let form = MetaplecticForm::new(f.modulus, &f.q_basis, &f.b_offdiag)
        .map_err(invalid)?
        .with_cyclotomic_trivial(f.cyclotomic_trivial);

    let mut expanded = doc.clone();
    expanded.catalog = None;
    expanded.galois_generators = vec![];
    expanded.analysis = None;
    expanded.root_datum = Some(datum_doc(&datum, action.generators()));
    expanded.form = FormDoc {
        modulus: f.modulus,
        q_basis: form.q_basis().iter().map(to_i64).collect(),
        b_offdiag: form.b_offdiag().iter().map(|r| r.iter().map(to_i64).collect()).collect(),
        cyclotomic_trivial: f.cyclotomic_trivial,
    };
    Ok(Resolved {
        datum,
        action,
        form,
        document: expanded,
    })
}

#[derive(Clone, Debug)]
pub struct ObstructionSection {
    pub report: ObstructionReport,
    pub coset: String,
    pub window: i64,
    pub window_solutions: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug)]
pub struct GenuineSection {
    pub field: LocalField,
    pub table: GenuineTable,
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub derived: DerivedLattices,
    pub b1: B1Table,
    pub b2: B2Pairing,
    pub sharp_datum: BasedRootDatum,
    pub dual_datum: BasedRootDatum,
    pub gamma: GammaSequence,
    pub obstruction: Option<ObstructionSection>,
    pub genuine: Option<GenuineSection>,
}

pub fn obstruction_section(seq: &GammaSequence, chi: &[i64], window: i64) -> Result<ObstructionSection, DocError> {
    let chi: Vec<BigInt> = chi.iter().map(|&x| BigInt::from(x)).collect();
    let report = solve_obstruction(seq, &chi).map_err(invalid)?;
    Ok(ObstructionSection {
        coset: format_coset(seq, &report),
        window_solutions: solutions_in_window(seq, &chi, window),
        window,
        report,
    })
}

fn genuine_section(r: &Resolved, derived: &DerivedLattices, g: &GenuineDoc) -> Result<GenuineSection, DocError> {
    let field = LocalField::parse(&g.field).map_err(invalid)?;
    let modulus = r.form.modulus().clone();
    let torsion: Vec<u64> = match &g.torsion {
        Some(t) => t.clone(),
        None => derived
            .pi1_torsion
            .group
            .torsion()
            .iter()
            .map(|d| d.to_u64().expect("small torsion"))
            .collect(),
    };
    let f: Vec<BigInt> = match (&g.f_table, &g.f_kummer) {
        (Some(t), None) => t.iter().map(|&x| BigInt::from(x)).collect(),
        (None, Some(k)) => {
            let c = field.parse_element(&k.c).map_err(invalid)?;
            kummer_f_table(&field, &torsion, &c, &modulus).map_err(invalid)?
        }
        (None, None) => vec![BigInt::from(0); torsion.len()],
        (Some(_), Some(_)) => return Err(DocError::Invalid("give either f_table or f_kummer, not both".into())),
    };
    let table = genuine_character_obstruction(&field, &torsion, &g.eps, &f, &modulus).map_err(invalid)?;
    Ok(GenuineSection { field, table })
}

/// Runs the full pipeline. `window` bounds the enumerated solution classes.
pub fn analyze(r: &Resolved, window: Option<i64>) -> Result<Analysis, DocError> {
    let derived = derive(&r.datum).map_err(invalid)?;
    let b1 = derive_b1(&r.datum, &r.form).map_err(invalid)?;
    let b2 = derive_b2(&r.datum, &r.form).map_err(invalid)?;
    let gamma = build_gamma(&r.datum, &r.action, &r.form).map_err(invalid)?;
    let sharp_datum = sharp_root_datum(&gamma.sharp).map_err(invalid)?;
    let dual_datum = dual_root_datum(&sharp_datum);
    let window = window.unwrap_or_else(|| 2 * to_i64(r.form.modulus()));
    let obstruction = match &r.document.obstruction {
        Some(o) => Some(obstruction_section(&gamma, &o.chi, window)?),
        None => None,
    };
    let genuine = match &r.document.genuine_character {
        Some(g) => Some(genuine_section(r, &derived, g)?),
        None => None,
    };
    Ok(Analysis {
        derived,
        b1,
        b2,
        sharp_datum,
        dual_datum,
        gamma,
        obstruction,
        genuine,
    })
}

fn num(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn vec_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(num).collect())
}

fn rows_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vec_json(&m.row(i))).collect())
}

fn cols_json(m: &IntMatrix) -> Value {
    Value::Array(m.col_vectors().iter().map(|c| vec_json(c)).collect())
}

fn datum_json(d: &BasedRootDatum) -> Value {
    json!({
        "rank": d.rank(),
        "simple_coroots": cols_json(d.coroots()),
        "simple_roots": rows_json(d.roots()),
    })
}

pub fn analysis_json(a: &Analysis) -> Value {
    let g = &a.gamma;
    let s = &g.sharp;
    let mut out = json!({
        "derived": {
            "pi1": a.derived.pi1.group.to_string(),
            "pi1_torsion": a.derived.pi1_torsion.group.to_string(),
            "pi1_coinvariants": g.middle.group.to_string(),
        },
        "b1": rows_json(&a.b1.table),
        "b2": {
            "kernel_basis": cols_json(&a.b2.kernel_basis),
            "table": Value::Array(a.b2.table.iter().map(|r| vec_json(r)).collect()),
        },
        "sharp": {
            "lattice_basis": cols_json(&s.basis),
            "orders": vec_json(&s.orders),
            "simple_coroots": cols_json(&s.coroots),
            "pi1": s.pi1.group.to_string(),
            "epsilon": s.epsilon,
            "adjoint_basis": cols_json(&s.ad_basis),
        },
        "sharp_datum": datum_json(&a.sharp_datum),
        "dual_datum": datum_json(&a.dual_datum),
        "gamma": {
            "source": g.source.group.to_string(),
            "middle": g.middle.group.to_string(),
            "induced": rows_json(&g.induced.matrix),
            "C": g.c.group.to_string(),
            "K": g.k.group.to_string(),
            "gamma": rows_json(&g.gamma.matrix),
        },
        "warnings": g.warnings,
    });
    if let Some(o) = &a.obstruction {
        out["obstruction"] = json!({
            "chi": vec_json(&o.report.chi),
            "representative": vec_json(&o.report.solution_representative),
            "kernel_generators": Value::Array(o.report.kernel_generators.iter().map(|k| vec_json(k)).collect()),
            "coset_size": o.report.coset_size.to_string(),
            "solvable": o.report.solvable,
            "solutions": o.coset,
            "window": o.window,
            "window_solutions": Value::Array(o.window_solutions.iter().map(|k| vec_json(k)).collect()),
        });
    }
    if let Some(gs) = &a.genuine {
        out["genuine_character"] = json!({
            "field": gs.field.descriptor(),
            "minus_one_symbol": gs.table.minus_one_symbol.map(|s| s.to_i8()),
            "rows": Value::Array(gs.table.rows.iter().map(|r| json!({
                "torsion": r.torsion,
                "mu_count": r.mu_count,
                "eps": r.eps,
                "sign_term": num(&r.sign_term),
                "f": num(&r.f),
                "value": num(&r.value),
            })).collect()),
            "vanishes": gs.table.vanishes,
            "genuine_character_exists": gs.table.vanishes,
        });
    }
    out
}

pub fn report_json(r: &Resolved, a: &Analysis) -> String {
    let mut doc = serde_json::to_value(&r.document).expect("documents serialize");
    doc["analysis"] = analysis_json(a);
    let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
    s.push('\n');
    s
}

fn fmt_rows(m: &IntMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| format!("[{}]", m.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn fmt_cols(m: &IntMatrix) -> String {
    fmt_rows(&m.transpose())
}

pub fn fmt_element(v: &[BigInt]) -> String {
    match v {
        [x] => x.to_string(),
        _ => format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
    }
}

fn group(g: &FgAbGroup) -> String {
    g.to_string()
}

pub fn report_text(r: &Resolved, a: &Analysis) -> String {
    let mut s = String::new();
    let d = &r.datum;
    let g = &a.gamma;
    let sh = &g.sharp;
    let _ = writeln!(s, "root datum: {} (rank {}, semisimple rank {})", d.label(), d.rank(), d.semisimple_rank());
    let _ = writeln!(s, "  simple coroots: {}", fmt_cols(d.coroots()));
    let _ = writeln!(s, "  simple roots:   {}", fmt_rows(d.roots()));
    if r.action.generators().is_empty() {
        let _ = writeln!(s, "  Galois action: trivial");
    } else {
        for (k, m) in r.action.generators().iter().enumerate() {
            let _ = writeln!(s, "  Galois generator {k}: {}", fmt_rows(m));
        }
    }
    let _ = writeln!(
        s,
        "form: N = {}, Q(e_i) = {}, b = {}",
        r.form.modulus(),
        fmt_element(r.form.q_basis()),
        fmt_rows(r.form.b_matrix())
    );
    let _ = writeln!(s, "π₁G ≅ {}", group(&a.derived.pi1.group));
    let _ = writeln!(s, "(π₁G)_Γ ≅ {}", group(&g.middle.group));
    let _ = writeln!(s, "b₁(α_i, ω_j) = {}", fmt_rows(&a.b1.table));
    let b2_rows: Vec<String> = a.b2.table.iter().map(|r| format!("[{}]", fmt_element(r))).collect();
    let _ = writeln!(
        s,
        "b₂: Ker(Λ → Λ_ad) basis {}, values {}",
        fmt_cols(&a.b2.kernel_basis),
        if b2_rows.is_empty() { "none".to_string() } else { b2_rows.join(" ") }
    );
    let _ = writeln!(s, "Λ♯ basis: {}", fmt_cols(&sh.basis));
    let _ = writeln!(s, "Δ♯: {}", fmt_cols(&sh.coroots));
    let _ = writeln!(s, "π₁G♯ ≅ {}, ε = {:?}", group(&sh.pi1.group), sh.epsilon);
    let _ = writeln!(
        s,
        "sharp datum: coroots {}, roots {}",
        fmt_cols(a.sharp_datum.coroots()),
        fmt_rows(a.sharp_datum.roots())
    );
    let _ = writeln!(
        s,
        "dual datum H: coroots {}, roots {}",
        fmt_cols(a.dual_datum.coroots()),
        fmt_rows(a.dual_datum.roots())
    );
    let _ = writeln!(s, "(π₁G♯)_Γ ≅ {}", group(&g.source.group));
    let _ = writeln!(s, "(π₁G♯)_Γ → (π₁G)_Γ: {}", fmt_rows(&g.induced.matrix));
    let _ = writeln!(s, "C ≅ {}", group(&g.c.group));
    let _ = writeln!(s, "γ: {}", fmt_rows(&g.gamma.matrix));
    let _ = writeln!(s, "K ≅ {}", group(&g.k.group));
    for w in &g.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    if let Some(o) = &a.obstruction {
        s.push_str(&obstruction_text(o));
    }
    if let Some(gs) = &a.genuine {
        s.push_str(&genuine_text(gs));
    }
    s
}

pub fn obstruction_text(o: &ObstructionSection) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "chi = {}", fmt_element(&o.report.chi));
    let _ = writeln!(s, "representative: {}", fmt_element(&o.report.solution_representative));
    let kg: Vec<String> = o.report.kernel_generators.iter().map(|k| fmt_element(k)).collect();
    let _ = writeln!(s, "ker(γ) generators: {}", if kg.is_empty() { "none".into() } else { kg.join(", ") });
    let _ = writeln!(s, "coset size: {}", o.report.coset_size);
    let _ = writeln!(s, "solutions: {}", o.coset);
    let ws: Vec<String> = o.window_solutions.iter().map(|k| fmt_element(k)).collect();
    let _ = writeln!(s, "solutions with coordinates in [-{w}, {w}]: {}", ws.join(", "), w = o.window);
    s
}

pub fn genuine_text(gs: &GenuineSection) -> String {
    let mut s = String::new();
    let t = &gs.table;
    let _ = writeln!(s, "field: {} (N = {})", gs.field.descriptor(), t.modulus);
    if let Some(sym) = t.minus_one_symbol {
        let _ = writeln!(s, "{{-1, -1}} = {sym}");
    }
    for (i, r) in t.rows.iter().enumerate() {
        let _ = writeln!(
            s,
            "θ{i} ∈ μ_{}(F) (order {}): eps {}, sign term {}, f {}, value {}",
            r.torsion, r.mu_count, r.eps, r.sign_term, r.f, r.value
        );
    }
    let _ = writeln!(s, "genuine character exists: {}", if t.vanishes { "yes" } else { "no" });
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const KP: &str = r#"{
        "catalog": {"name": "GL", "n": 2},
        "form": {"N": 2, "q_basis": [0, 0], "b_offdiag": [[1]]},
        "obstruction": {"chi": [1]}
    }"#;

    #[test]
    fn kp_report() {
        let r = resolve(&parse_document(KP).unwrap()).unwrap();
        let a = analyze(&r, None).unwrap();
        let text = report_text(&r, &a);
        assert!(text.contains("K ≅ Z/2"), "{text}");
        assert!(text.contains("solutions: 1 + 2Z"), "{text}");
    }

    #[test]
    fn round_trip_is_stable() {
        let r = resolve(&parse_document(KP).unwrap()).unwrap();
        let first = report_json(&r, &analyze(&r, None).unwrap());
        let r2 = resolve(&parse_document(&first).unwrap()).unwrap();
        let second = report_json(&r2, &analyze(&r2, None).unwrap());
        assert_eq!(first, second);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_document("{").unwrap_err().exit_code(), 1);
        let both = r#"{"form": {"N": 2, "q_basis": []}}"#;
        assert_eq!(resolve(&parse_document(both).unwrap()).unwrap_err().exit_code(), 2);
        let not_strict = r#"{"catalog": {"name": "GL", "n": 2}, "form": {"N": 2, "q_basis": [1, 0], "b_offdiag": [[0]]}}"#;
        let r = resolve(&parse_document(not_strict).unwrap()).unwrap();
        assert_eq!(analyze(&r, None).unwrap_err().exit_code(), 2);
    }
}
