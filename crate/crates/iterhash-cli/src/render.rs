//! Output rendering. CSV uses comma separators and `.` decimal points,
//! independent of locale.

use crate::Format;
use iterhash::bounds::BoundsRow;
use iterhash::verifier::{
    GpRowMode, GpTableRow, Prob, UniformityVerdict, VerificationReport,
};

pub fn chars_str(s: &[u64]) -> String {
    s.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn prob_str(p: &Prob) -> String {
    match p {
        Prob::Exact(r) => format!("{} = {}", r, r.round2()),
        Prob::Estimate {
            mean,
            wilson_low,
            wilson_high,
        } => format!("{mean:.6} (95% wilson [{wilson_low:.6}, {wilson_high:.6}])"),
    }
}

pub fn report_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("family:        {}\n", r.family));
    out.push_str(&format!(
        "string set:    {} (sigma={}, max_len={}, {} strings, exclusion={})\n",
        r.string_set.rule,
        r.string_set.alphabet_size,
        r.string_set.max_len,
        r.string_set.count,
        r.string_set.exclusion
    ));
    match &r.mode {
        iterhash::verifier::ReportMode::Exact { instances } => {
            out.push_str(&format!("mode:          exact over {instances} instances\n"))
        }
        iterhash::verifier::ReportMode::MonteCarlo { trials, seed, confidence } => out.push_str(
            &format!("mode:          monte-carlo, {trials} trials, seed {seed}, confidence {confidence}\n"),
        ),
    }
    out.push_str(&format!("hash values:   {}\n", r.value_count));
    let uniformity = match &r.uniformity {
        UniformityVerdict::Uniform => "uniform".to_string(),
        UniformityVerdict::NotUniform { string, value, count } => format!(
            "not uniform: P(h([{}]) = {}) has count {}",
            chars_str(string),
            value,
            count
        ),
        UniformityVerdict::NotApplicable { reason } => format!("not applicable ({reason})"),
    };
    out.push_str(&format!("uniformity:    {uniformity}\n"));
    if let Some(p) = &r.eps_au {
        out.push_str(&format!("eps_au:        {}", prob_str(p)));
        if let Some(w) = &r.eps_au_witness {
            out.push_str(&format!("  [{} | {}]", chars_str(&w.a), chars_str(&w.b)));
        }
        out.push('\n');
    }
    if let Some(p) = &r.eps_axu {
        out.push_str(&format!(
            "eps_axu:       {}  ({:?} difference)",
            prob_str(p),
            r.xor_kind
        ));
        if let Some(w) = &r.eps_axu_witness {
            out.push_str(&format!(
                "  [{} | {} -> {}]",
                chars_str(&w.a),
                chars_str(&w.b),
                w.y
            ));
        }
        out.push('\n');
    }
    if let Some(p) = &r.eps_asu {
        out.push_str(&format!("eps_asu:       {}", prob_str(p)));
        if let Some(w) = &r.eps_asu_witness {
            out.push_str(&format!(
                "  [{} | {} -> ({}, {})]",
                chars_str(&w.a),
                chars_str(&w.b),
                w.y,
                w.y2.unwrap_or_default()
            ));
        }
        out.push('\n');
    }
    if let Some(pi) = r.pairwise_independent {
        out.push_str(&format!("pairwise independent: {pi}\n"));
    }
    for v in &r.kwise {
        out.push_str(&format!(
            "{}-wise independent: {}{}\n",
            v.k,
            v.independent,
            if v.trivial { " (trivially: fewer strings than k)" } else { "" }
        ));
    }
    for v in &r.kwise_collision {
        out.push_str(&format!(
            "max {}-way collision: {}\n",
            v.k,
            prob_str(&v.prob)
        ));
    }
    out
}

pub fn bounds_table(rows: &[BoundsRow], format: Format) -> String {
    match format {
        Format::Json => {
            let docs: Vec<serde_json::Value> = rows.iter().map(bounds_row_json).collect();
            serde_json::to_string_pretty(&docs).unwrap() + "\n"
        }
        _ => {
            let mut out = String::from("L,card_universal,card_strong,struct_universal\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.word_bits,
                    r.cardinality_universal,
                    r.cardinality_strong,
                    r.structural_universal
                ));
            }
            out
        }
    }
}

fn bounds_row_json(r: &BoundsRow) -> serde_json::Value {
    serde_json::json!({
        "L": r.word_bits,
        "cardinality_universal": r.cardinality_universal.to_string(),
        "cardinality_strong": r.cardinality_strong.to_string(),
        "cardinality_almost": r.cardinality_almost.to_string(),
        "structural_universal": r.structural_universal.to_string(),
        "structural_strong": r.structural_strong.to_string(),
        "structural_almost": r.structural_almost.to_string(),
    })
}

pub fn bounds_row(r: &BoundsRow, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&bounds_row_json(r)).unwrap() + "\n",
        Format::Csv => {
            let mut out = String::from("column,value\n");
            out.push_str(&format!("L,{}\n", r.word_bits));
            out.push_str(&format!("cardinality_universal,{}\n", r.cardinality_universal));
            out.push_str(&format!("cardinality_strong,{}\n", r.cardinality_strong));
            out.push_str(&format!("cardinality_almost,{}\n", r.cardinality_almost));
            out.push_str(&format!("structural_universal,{}\n", r.structural_universal));
            out.push_str(&format!("structural_strong,{}\n", r.structural_strong));
            out.push_str(&format!("structural_almost,{}\n", r.structural_almost));
            out
        }
        Format::Text => format!(
            "L = {}\n  cardinality: universal {}  strong {}  almost {}\n  structural:  universal {}  strong {}  almost {}\n",
            r.word_bits,
            r.cardinality_universal,
            r.cardinality_strong,
            r.cardinality_almost,
            r.structural_universal,
            r.structural_strong,
            r.structural_almost
        ),
    }
}

pub fn gp_table_out(rows: &[GpTableRow], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).unwrap() + "\n",
        _ => {
            let mut out = String::from("n,probability,mode,witness_a,witness_b\n");
            for r in rows {
                let (wa, wb) = match &r.witness {
                    Some(w) => (chars_str(&w.a), chars_str(&w.b)),
                    None => (String::new(), String::new()),
                };
                let marker = match r.mode {
                    GpRowMode::Exact => "exact",
                    GpRowMode::LowerBound => "lower-bound",
                };
                out.push_str(&format!("{},{},{},{},{}\n", r.n, r.prob.round2(), marker, wa, wb));
            }
            out
        }
    }
}

pub fn single_value(name: &str, value: &str, format: Format) -> String {
    match format {
        Format::Json => format!("{{\"{name}\": \"{value}\"}}\n"),
        Format::Csv => format!("{name},{value}\n"),
        Format::Text => format!("{name} = {value}\n"),
    }
}
