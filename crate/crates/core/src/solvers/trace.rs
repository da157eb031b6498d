use std::fmt::Write as _;

/// One row of the convergence trace. Column order is fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub objective: f64,
    pub dual: Option<f64>,
    pub gap: Option<f64>,
    pub certified_bound: Option<f64>,
    /// `A_k` for the ∞-memory method, `c_k` for the 1-memory method.
    pub a_or_c: f64,
    pub l_k: f64,
    pub probes: usize,
    pub elapsed_ms: f64,
}

pub const TRACE_COLUMNS: [&str; 9] =
    ["k", "J", "D", "gap", "certified_bound", "A_or_c", "L_k", "probes", "elapsed_ms"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceTrace {
    pub rows: Vec<TraceRow>,
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:e}"))
}

fn json_num(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:e}"),
        _ => "null".into(),
    }
}

impl ConvergenceTrace {
    pub fn push(&mut self, row: TraceRow) {
        self.rows.push(row);
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    pub fn to_csv(&self) -> String {
        let mut s = TRACE_COLUMNS.join(",");
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{:e},{},{},{},{:e},{:e},{},{:.3}",
                r.k,
                r.objective,
                opt(r.dual),
                opt(r.gap),
                opt(r.certified_bound),
                r.a_or_c,
                r.l_k,
                r.probes,
                r.elapsed_ms
            );
        }
        s
    }

    pub fn to_json_lines(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{{\"k\":{},\"J\":{},\"D\":{},\"gap\":{},\"certified_bound\":{},\"A_or_c\":{},\"L_k\":{},\"probes\":{},\"elapsed_ms\":{:.3}}}",
                r.k,
                json_num(Some(r.objective)),
                json_num(r.dual),
                json_num(r.gap),
                json_num(r.certified_bound),
                json_num(Some(r.a_or_c)),
                json_num(Some(r.l_k)),
                r.probes,
                r.elapsed_ms
            );
        }
        s
    }
}
