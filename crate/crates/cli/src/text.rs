//! Plain-text renderings of reports.

use std::fmt::Write;

use toric_alpha::report::ReportDocument;
use toric_alpha::{FanDiagnosis, NamedFan, RatVector};

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join(vectors: &[RatVector]) -> String {
    if vectors.is_empty() {
        return "none".into();
    }
    vectors.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

pub fn diagnosis(name: &str, d: &FanDiagnosis) -> String {
    let mut out = String::new();
    writeln!(out, "fan:      {name}").unwrap();
    writeln!(out, "complete: {}", yes_no(d.is_complete)).unwrap();
    writeln!(out, "regular:  {}", yes_no(d.is_regular)).unwrap();
    writeln!(out, "fano:     {}", yes_no(d.is_fano)).unwrap();
    for finding in &d.failures {
        writeln!(out, "  {finding}").unwrap();
    }
    out
}

pub fn symmetry(doc: &ReportDocument) -> String {
    let s = doc.symmetry.as_ref().expect("symmetry section");
    let mut out = String::new();
    writeln!(out, "fan:         {}", doc.input.name).unwrap();
    writeln!(out, "group order: {}", s.group_order).unwrap();
    for g in s.elements.iter().flatten() {
        let rows: Vec<String> = g.iter().map(|r| format!("[{}]", r.join(", "))).collect();
        writeln!(out, "  [{}]", rows.join(", ")).unwrap();
    }
    writeln!(out, "fixed in N:  dim {}, basis {}", s.fixed_dim_n, join(&s.fixed_basis_n)).unwrap();
    writeln!(out, "fixed in M:  dim {}, basis {}", s.fixed_dim_m, join(&s.fixed_basis_m)).unwrap();
    writeln!(out, "symmetric:   {}", yes_no(s.fixed_dim_m == 0)).unwrap();
    out
}

pub fn alpha(doc: &ReportDocument) -> String {
    let a = doc.alpha.as_ref().expect("alpha section");
    let mut out = String::new();
    writeln!(out, "fan:        {}", doc.input.name).unwrap();
    writeln!(out, "symmetric:  {}", yes_no(a.symmetric)).unwrap();
    if let Some(t) = &a.t_star {
        writeln!(out, "t*:         {t}").unwrap();
    }
    writeln!(out, "alpha_G:    {}", a.alpha).unwrap();
    if !a.symmetric {
        writeln!(out, "minimizers: {}", join(&a.minimizers)).unwrap();
    }
    if let Some(m0) = &a.m_zero {
        writeln!(out, "m0:         {m0}").unwrap();
    }
    if !a.certificate.is_empty() {
        writeln!(out, "certificate:").unwrap();
        for c in &a.certificate {
            writeln!(out, "  vertex {}  gauge(-v) {}  ratio {}", c.vertex, c.opposite_gauge, c.ratio).unwrap();
        }
    }
    for row in doc.alpha_m.iter().flatten() {
        writeln!(out, "alpha_{{{},G}}: {}", row.m, row.value).unwrap();
    }
    out
}

pub fn points(doc: &ReportDocument) -> String {
    let l = doc.lattice_points.as_ref().expect("lattice section");
    let mut out = String::new();
    writeln!(out, "fan:    {}", doc.input.name).unwrap();
    writeln!(out, "m:      {}", l.m).unwrap();
    writeln!(out, "points: {}", l.count).unwrap();
    for p in l.points.iter().flatten() {
        let coords: Vec<String> = p.iter().map(ToString::to_string).collect();
        writeln!(out, "  ({})", coords.join(", ")).unwrap();
    }
    out
}

pub fn barycenter(doc: &ReportDocument) -> String {
    let b = doc.barycenter.as_ref().expect("barycenter section");
    format!("fan:        {}\nbarycenter: {b}\n", doc.input.name)
}

pub fn oracle(doc: &ReportDocument) -> String {
    let o = doc.oracle.as_ref().expect("oracle section");
    let mut out = String::new();
    writeln!(out, "fan:       {}", doc.input.name).unwrap();
    writeln!(out, "alpha:     {}", o.alpha).unwrap();
    writeln!(out, "direction: {}", o.direction).unwrap();
    writeln!(out, "exact:     {}", if o.exact_predicate { "finite" } else { "not certified finite" }).unwrap();
    writeln!(out, "numerical: {:?}", o.numerical.verdict).unwrap();
    for stage in &o.numerical.estimates {
        writeln!(out, "  R = {:<8} log I = {:.6}", stage.cutoff, stage.log_estimate).unwrap();
    }
    writeln!(out, "growth ratio: {:.6}", o.numerical.growth_ratio).unwrap();
    if let Some(note) = &o.numerical.note {
        writeln!(out, "note: {note}").unwrap();
    }
    out
}

pub fn catalog(entries: &[NamedFan]) -> String {
    let mut out = String::new();
    for e in entries {
        let description = e.metadata.get("description").and_then(|d| d.as_str()).unwrap_or("");
        writeln!(out, "@{:<7} {description}", e.name).unwrap();
    }
    out
}
