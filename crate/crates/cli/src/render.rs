//! Markdown rendering of the command reports. JSON comes from serde; both
//! are deterministic for fixed inputs and seeds.

use crate::commands::*;
use crate::doc;

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn component_lines(out: &mut String, components: &[ComponentBlock], indent: &str) {
    if components.is_empty() {
        out.push_str(&format!("{indent}- (zero)\n"));
        return;
    }
    for c in components {
        out.push_str(&format!(
            "{indent}- {} at {} (endomorphism degree {}):\n",
            c.role, c.form, c.endo_degree
        ));
        for b in &c.blocks {
            let rows: Vec<String> = b.matrix.iter().map(|r| r.join(", ")).collect();
            out.push_str(&format!(
                "{indent}  - from degree {}: [{}]\n",
                b.source_degree,
                rows.join("; ")
            ));
        }
    }
}

pub fn check_markdown(r: &CheckReport) -> String {
    let mut out = String::from("# liemod check\n\n");
    out.push_str("## algebra\n");
    out.push_str(&format!("- dimension: {}\n", r.algebra.dimension));
    match &r.algebra.violation {
        None => out.push_str("- jacobi: pass\n"),
        Some(t) => out.push_str(&format!(
            "- jacobi: FAIL at ({}, {}, {})\n",
            t[0], t[1], t[2]
        )),
    }
    if !r.modules.is_empty() {
        out.push_str("\n## modules\n");
        for m in &r.modules {
            out.push_str(&format!(
                "- {}: Q^2 = 0 {}, leibniz {}\n",
                m.name,
                pass(m.q_square_ok),
                pass(m.leibniz_ok)
            ));
            if let Some(w) = &m.witness {
                out.push_str(&format!("  - witness: {w}\n"));
            }
        }
    }
    if !r.metrics.is_empty() {
        out.push_str("\n## metrics\n");
        for m in &r.metrics {
            out.push_str(&format!("- {}: {}\n", m.module, pass(m.ok)));
            if let Some(d) = &m.detail {
                out.push_str(&format!("  - {d}\n"));
            }
        }
    }
    if !r.tasks.is_empty() {
        out.push_str("\n## tasks\n");
        for t in &r.tasks {
            out.push_str(&format!("- {}: {}\n", t.command, pass(t.ok)));
            if let Some(d) = &t.detail {
                out.push_str(&format!("  - {d}\n"));
            }
        }
    }
    out.push_str(&format!("\noverall: {}\n", pass(r.pass)));
    out
}

pub fn cohomology_markdown(r: &CohomologyReport) -> String {
    let mut out = format!("# cohomology of `{}`\n\n", r.module);
    out.push_str("| degree | betti | representatives |\n");
    out.push_str("|---|---|---|\n");
    for e in &r.entries {
        let reps = if e.representatives.is_empty() {
            "-".to_string()
        } else {
            e.representatives.join(" ; ")
        };
        out.push_str(&format!("| {} | {} | {} |\n", e.degree, e.betti, reps));
    }
    out
}

pub fn decompose_markdown(r: &DecomposeReport) -> String {
    let mut out = format!("# decomposition of `{}`\n", r.module);
    for run in &r.runs {
        out.push_str(&format!("\n## {} (flat: {})\n", run.label, run.flat));
        component_lines(&mut out, &run.components, "");
    }
    for c in &r.comparisons {
        out.push_str(&format!(
            "\n## gauge comparison: {} vs {}\n",
            c.left, c.right
        ));
        out.push_str(&format!("- u D1 = D2 u verified: {}\n", pass(c.verified)));
        out.push_str("- correction components of u:\n");
        component_lines(&mut out, &c.components, "  ");
    }
    out
}

pub fn ops_markdown(r: &OpsReport) -> String {
    let mut out = format!("# ops: {}\n\n", r.result);
    out.push_str(&format!("- inputs: {}\n", r.inputs.join(", ")));
    out.push_str(&format!("- flat: {}\n", r.flat));
    out.push_str("\n```json\n");
    out.push_str(&doc::to_json(&r.document));
    out.push_str("```\n");
    out
}

pub fn deform_markdown(r: &DeformReport) -> String {
    let mut out = format!("# deformation step for `{}`\n\n", r.derivation);
    out.push_str(&format!("- degree: {}\n", r.degree));
    out.push_str(&format!("- cocycle: {}\n", pass(r.is_cocycle)));
    match &r.trivialization {
        Some(lines) => {
            out.push_str("- the cocycle is exact; a primitive:\n");
            for l in lines {
                out.push_str(&format!("  - {l}\n"));
            }
        }
        None => out.push_str("- the cocycle is not exact (nontrivial class)\n"),
    }
    match &r.outcome {
        DeformOutcome::Extension { next } => {
            out.push_str("- extension found; next coefficient:\n");
            for l in next {
                out.push_str(&format!("  - {l}\n"));
            }
        }
        DeformOutcome::Obstruction { representative } => {
            out.push_str("- obstructed; degree-2 class representative:\n");
            for l in representative {
                out.push_str(&format!("  - {l}\n"));
            }
        }
    }
    out
}

pub fn charclass_markdown(r: &CharclassReport) -> String {
    let mut out = format!("# characteristic classes for `{}`\n\n", r.module);
    match r.mode.as_str() {
        "pair" => out.push_str(&format!(
            "- mode: pair with `{}`\n",
            r.other.as_deref().unwrap_or("?")
        )),
        _ => out.push_str(&format!(
            "- mode: metric ({})\n",
            r.metric.as_deref().unwrap_or("id")
        )),
    }
    for e in &r.entries {
        out.push_str(&format!("\n## k = {}\n", e.k));
        out.push_str(&format!("- cs_{} = {}\n", e.k, e.cs));
        if let Some(cf) = &e.closed_formula {
            out.push_str(&format!("- closed formula: {cf}\n"));
        }
        if let Some(agree) = e.routes_agree {
            out.push_str(&format!(
                "- berezin route equals closed formula: {}\n",
                pass(agree)
            ));
        }
        if let (Some(l), Some(r2)) = (&e.ch_left, &e.ch_right) {
            out.push_str(&format!("- ch_k left: {l}\n"));
            out.push_str(&format!("- ch_k right: {r2}\n"));
        }
        if let Some(ok) = e.d_cs_matches_chern_difference {
            out.push_str(&format!(
                "- d cs_k = ch_k(right) - ch_k(left): {}\n",
                pass(ok)
            ));
        }
        if let Some(exact) = e.class_exact {
            out.push_str(&format!("- class exact: {exact}\n"));
        }
        if let Some(p) = &e.exactness_primitive {
            out.push_str(&format!("- primitive: {p}\n"));
        }
        if let Some(components) = &e.class_components {
            if components.is_empty() {
                out.push_str("- class: zero\n");
            } else {
                out.push_str("- class components by degree:\n");
                for c in components {
                    out.push_str(&format!(
                        "  - degree {}: {} ({})\n",
                        c.degree,
                        c.representative,
                        if c.zero_class {
                            "zero class"
                        } else {
                            "nonzero class"
                        }
                    ));
                }
            }
        }
    }
    out
}

pub fn derived_bracket_markdown(r: &DerivedBracketReport) -> String {
    let mut out = format!("# derived bracket of `{}`\n\n", r.derivation);
    out.push_str(&format!("- derivation degree: {}\n", r.degree));
    out.push_str(&format!("- bracket arity: {}\n\n", r.arity));
    out.push_str("| arguments | value |\n|---|---|\n");
    for e in &r.entries {
        out.push_str(&format!("| [{}] | {} |\n", e.args.join(", "), e.value));
    }
    out
}
