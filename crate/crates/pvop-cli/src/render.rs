//! Plain-text rendering of core reports.

use pvop_core::regularity::{
    R0Report, RegularityReport, ScalarRecessionVerdict, StrongReason, StrongVerdict, TriState,
    VerdictKind, WeakVerdict, ZeroWeakStatus,
};
use pvop_core::solver::{ParetoResult, SolveStatus};

pub fn format_vec(v: &[f64]) -> String {
    let inner: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", inner.join(", "))
}

fn verdict_line(v: &ScalarRecessionVerdict) -> String {
    match v.kind {
        VerdictKind::OnlyZero => format!("only-zero (min on base {:.6e})", v.min_on_base),
        VerdictKind::Empty => format!(
            "empty (descent direction {}; min on base {:.6e})",
            v.witness.as_deref().map(format_vec).unwrap_or_default(),
            v.min_on_base
        ),
        VerdictKind::HasNonzero => format!(
            "has-nonzero (annihilator {}; min on base {:.6e})",
            v.witness.as_deref().map(format_vec).unwrap_or_default(),
            v.min_on_base
        ),
        VerdictKind::Inconclusive => format!("inconclusive (min on base {:.6e})", v.min_on_base),
    }
}

pub fn regularity_text(report: &RegularityReport) -> String {
    let mut out = String::new();
    let strong = match &report.strong {
        StrongVerdict::Yes(StrongReason::WeakSolSetIsZero) => {
            "yes (recession weak front = {0})".to_string()
        }
        StrongVerdict::Yes(StrongReason::WeakSolSetEmpty { witness }) => format!(
            "yes (recession weak front empty; descent direction {})",
            format_vec(witness)
        ),
        StrongVerdict::No {
            witness,
            validated_against,
        } => format!(
            "no (weak-Pareto direction {}, validated against {validated_against} samples)",
            format_vec(witness)
        ),
        StrongVerdict::Inconclusive => "inconclusive".to_string(),
    };
    out.push_str(&format!("strong-regular: {strong}\n"));
    let weak = match &report.weak {
        WeakVerdict::Yes => "yes".to_string(),
        WeakVerdict::No {
            candidate,
            validated_against,
        } => format!(
            "no (Pareto candidate {}, validated against {validated_against} comparisons)",
            format_vec(candidate)
        ),
        WeakVerdict::Inconclusive => "inconclusive".to_string(),
    };
    out.push_str(&format!("weak-regular: {weak}\n"));
    for (i, v) in report.per_component.iter().enumerate() {
        out.push_str(&format!("component {}: {}\n", i + 1, verdict_line(v)));
    }
    let zero = match &report.zero_weak {
        ZeroWeakStatus::ZeroIsWeakPareto => "origin is weak-Pareto for the recession problem".to_string(),
        ZeroWeakStatus::ZeroNotWeakPareto {
            witness,
            leading_values,
        } => format!(
            "origin dominated along {} (leading values {})",
            format_vec(witness),
            format_vec(leading_values)
        ),
    };
    out.push_str(&format!("zero-direction: {zero}\n"));
    let bounded = match report.f_bounded_below_implied {
        TriState::Yes => "yes",
        TriState::No => "no",
        TriState::Unknown => "unknown",
    };
    out.push_str(&format!("bounded-below-implied: {bounded}\n"));
    out.push_str(&format!("samples: {}\n", report.samples_used));
    out
}

pub fn r0_text(report: &R0Report) -> String {
    if report.is_r0() {
        format!(
            "complementarity-regular: yes (sampled, {} base points)\n",
            report.samples_checked
        )
    } else {
        format!(
            "complementarity-regular: no (witness {}; products {})\n",
            report.witness.as_deref().map(format_vec).unwrap_or_default(),
            report
                .witness_condition
                .as_deref()
                .map(format_vec)
                .unwrap_or_default()
        )
    }
}

pub fn solve_text(result: &ParetoResult) -> String {
    let mut out = String::new();
    let status = match result.status {
        SolveStatus::Found => "found",
        SolveStatus::EmptyCertified => "empty-certified",
        SolveStatus::UnboundedDescent => "unbounded-descent",
        SolveStatus::Unknown => "unknown",
    };
    out.push_str(&format!("status: {status}\n"));
    if let Some(p) = &result.point {
        out.push_str(&format!("point: {}\n", format_vec(p)));
    }
    if let Some(v) = &result.objective_values {
        out.push_str(&format!("values: {}\n", format_vec(v)));
    }
    out.push_str("certificate:\n");
    for line in &result.certificate {
        out.push_str(&format!("  - {line}\n"));
    }
    out
}
