//! Text rendering for reports and CSV rendering for sweeps.

use quasijoint::{
    CorrelationRegime, Report, SamplingBlock, SeparabilityBlock, SweepRow, WitnessReport,
    WitnessStatus, OUTCOMES,
};

fn outcome_label(x: i8, y: i8) -> String {
    let sign = |v: i8| if v == 1 { '+' } else { '-' };
    format!("({}{})", sign(x), sign(y))
}

fn four(entries: &[f64; 4]) -> String {
    OUTCOMES
        .iter()
        .zip(entries)
        .map(|(&(x, y), p)| format!("{} {:+.7}", outcome_label(x, y), p))
        .collect::<Vec<_>>()
        .join("  ")
}

fn push_witness(out: &mut String, w: &WitnessReport) {
    let s = w.input;
    out.push_str(&format!(
        "  state            ({:+.6}, {:+.6}, {:+.6})  |s| = {:.6}\n",
        s.x(),
        s.y(),
        s.z(),
        s.norm()
    ));
    out.push_str(&format!(
        "  strength eta     {:.6}\n  threshold ratio  sqrt(3)|s|/eta = {:.6}\n",
        w.eta, w.threshold_ratio
    ));
    out.push_str(&format!(
        "  observed joint   {}\n",
        four(w.observed.entries())
    ));
    out.push_str(&format!("  retrieved quasi  {}\n", four(w.quasi.entries())));
    out.push_str(&format!(
        "  min entry        {:+.10} at {}\n",
        w.min_entry,
        outcome_label(w.min_outcome.0, w.min_outcome.1)
    ));
    let verdict = match w.status {
        WitnessStatus::Nonclassical => "NONCLASSICAL: negative quasi-probability entry",
        WitnessStatus::MaximallyMixed => {
            "not flagged: s = 0 is uniform at every strength (no witness exists)"
        }
        WitnessStatus::StrengthAboveThreshold => {
            "not flagged at this strength: eta >= sqrt(3)|s| keeps the retrieved joint nonnegative"
        }
    };
    out.push_str(&format!("  verdict          {verdict}\n"));
}

fn push_separability(out: &mut String, block: &SeparabilityBlock) {
    let v = &block.verdict;
    let regime = match v.regime {
        CorrelationRegime::WithinDiskBound => "within the disk bound 1/2",
        CorrelationRegime::BeyondDiskBound => {
            "in (1/2, 1]: beyond the zero-marginal disk maximum, under the unit product-moment bound"
        }
        CorrelationRegime::BeyondUnitBound => "> 1: exceeds the unit-ball product-moment bound",
    };
    out.push_str(&format!(
        "  target moment    c = {:+.6} ({regime})\n",
        v.target_correlation
    ));
    match (v.feasible, v.witness_residual, v.infeasibility) {
        (true, Some(residual), _) => {
            let points = v.witness.as_ref().map_or(0, |w| w.len());
            out.push_str(&format!(
                "  LP verdict       feasible: {points}-point hidden-variable mixture reproduces the statistics (residual {residual:.2e})\n"
            ));
        }
        (false, _, Some(margin)) => {
            out.push_str(&format!(
                "  LP verdict       infeasible: no hidden-variable mixture exists (violation margin {margin:.3e})\n"
            ));
        }
        _ => out.push_str("  LP verdict       inconsistent verdict payload\n"),
    }
    out.push_str(&format!(
        "  grid             {} rings x {} angles ({} points), max correlation {:.4}\n",
        block.grid.rings, block.grid.angles, block.grid_points, block.grid_max_correlation
    ));
    if block.degenerate_grid {
        out.push_str(
            "  warning          grid max correlation < 0.45; infeasibility may reflect the grid, not the statistics\n",
        );
    }
}

fn push_sampling(out: &mut String, block: &SamplingBlock) {
    let sig = &block.significance;
    out.push_str(&format!(
        "  shots            {} (seed {})\n",
        block.record.total, block.record.seed
    ));
    let counts = OUTCOMES
        .iter()
        .zip(&block.record.counts)
        .map(|(&(x, y), c)| format!("{} {c}", outcome_label(x, y)))
        .collect::<Vec<_>>()
        .join("  ");
    out.push_str(&format!("  counts           {counts}\n"));
    out.push_str(&format!(
        "  estimated quasi  {}\n",
        four(block.estimate.estimate.entries())
    ));
    out.push_str(&format!(
        "  min estimate     {:+.6} +- {:.6} at {}\n",
        sig.min_entry,
        sig.std_error,
        outcome_label(sig.min_outcome.0, sig.min_outcome.1)
    ));
    if sig.degenerate_std_error {
        out.push_str("  warning          degenerate count vector: zero standard error\n");
    }
    out.push_str(&format!(
        "  z-score          {:.2} (threshold {:.1})\n  certification    {}\n",
        sig.z_score,
        sig.threshold,
        if sig.certified {
            "CERTIFIED nonclassical from counts"
        } else {
            "not certified at this shot count"
        }
    ));
}

/// Human-readable summary of a report.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let title = match report.config.command {
        quasijoint::CommandKind::Witness => "witness",
        quasijoint::CommandKind::Separability => "separability",
        quasijoint::CommandKind::Sample => "sample",
        quasijoint::CommandKind::Sweep => "sweep",
    };
    out.push_str(&format!("quasijoint {title}\n"));
    if let Some(w) = &report.witness {
        push_witness(&mut out, w);
    }
    if let Some(block) = &report.separability {
        push_separability(&mut out, block);
    }
    if let Some(block) = &report.sampling {
        push_sampling(&mut out, block);
    }
    out
}

/// CSV rows for a sweep, fixed column order.
pub fn render_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("s,eta,min_entry,nonclassical,lp_verdict\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.s,
            row.eta,
            row.min_entry,
            row.nonclassical,
            if row.lp_feasible {
                "feasible"
            } else {
                "infeasible"
            }
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use quasijoint::{run_witness, CommandKind, RunConfig, StateSpec};

    #[test]
    fn text_summary_mentions_the_verdict() {
        let mut config = RunConfig::new(CommandKind::Witness);
        config.state = Some(StateSpec::Bloch {
            components: [0.0, 0.0, 1.0],
        });
        let report = run_witness(&config).unwrap();
        let text = render_text(&report);
        assert!(text.contains("NONCLASSICAL"));
        assert!(text.contains("min entry"));
    }

    #[test]
    fn csv_has_stable_columns() {
        let rows = vec![SweepRow {
            s: 0.5,
            eta: 1.0,
            min_entry: 0.033,
            nonclassical: false,
            lp_feasible: true,
        }];
        let csv = render_csv(&rows);
        assert!(csv.starts_with("s,eta,min_entry,nonclassical,lp_verdict\n"));
        assert!(csv.contains("0.5,1,0.033,false,feasible"));
    }
}
