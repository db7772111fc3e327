use std::time::{Duration, Instant};

use latcode::bounds;
use latcode::clique_search::{
    count_maximum_cliques, max_clique, CliqueCount, CompatibilityGraph, Mode, SearchOptions,
};
use serde::Serialize;

/// A row of the published table of optimal codes.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceRow {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// Code size listed in the table.
    pub size: usize,
    /// "J1" or "J2": which Johnson bound the table lists.
    pub column: &'static str,
    pub bound: u128,
    pub n_max: u64,
    /// Marked as not achieving the bound.
    pub starred: bool,
}

#[allow(clippy::too_many_arguments)]
const fn row(n: usize, k: usize, d: usize, size: usize, column: &'static str, bound: u128, n_max: u64, starred: bool) -> ReferenceRow {
    ReferenceRow { n, k, d, size, column, bound, n_max, starred }
}

pub const ROWS: [ReferenceRow; 10] = [
    row(8, 4, 4, 14, "J2", 14, 30, false),
    row(8, 5, 4, 8, "J1", 16, 840, true),
    row(9, 4, 4, 18, "J2", 25, 1708, true),
    row(9, 5, 4, 18, "J1", 18, 1800, false),
    row(9, 7, 4, 4, "J1", 4, 945, false),
    row(9, 6, 6, 3, "J1", 3, 280, false),
    row(10, 3, 4, 13, "J2", 13, 373680, false),
    row(10, 7, 4, 8, "J2", 22, 3600, true),
    row(10, 6, 6, 5, "J1", 5, 30240, false),
    row(10, 7, 6, 3, "J1", 3, 2800, false),
];

#[derive(Debug, Clone, Serialize)]
pub struct RowReport {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub reference_size: usize,
    pub size: usize,
    pub complete: bool,
    /// "match", "discrepancy" or "skipped".
    pub status: &'static str,
    pub johnson1: Option<u128>,
    pub johnson2: Option<u128>,
    pub best_upper: Option<u128>,
    pub reference_column: &'static str,
    pub reference_bound: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<CliqueCount>,
    pub reference_count: u64,
    pub notes: Vec<String>,
    pub elapsed_secs: f64,
}

pub struct Table2Options {
    pub budget: Duration,
    pub count: bool,
    pub cap: u64,
}

pub fn run_row(r: &ReferenceRow, opts: &Table2Options) -> RowReport {
    let start = Instant::now();
    let (n, k, d) = (r.n as u64, r.k as u64, r.d as u64);
    let j1 = bounds::johnson1(n, k, d / 2).value();
    let j2 = bounds::johnson2(n, k, d / 2).ok();
    let best = bounds::best_upper_bound(n, k, d).ok();
    let mut notes = Vec::new();

    let graph = CompatibilityGraph::build(r.n, r.k, Mode::AtLeast(r.d)).expect("table rows are in range");
    let res = max_clique(
        &graph,
        &SearchOptions {
            timeout: Some(opts.budget),
            ..SearchOptions::with_bound_hint(&graph)
        },
    );
    let status = if !res.complete {
        notes.push(format!("time budget of {:?} exhausted; size is best found so far", opts.budget));
        "skipped"
    } else if res.max_size == r.size {
        "match"
    } else {
        "discrepancy"
    };
    if res.complete && res.max_size != r.size {
        if let Some(c) = ROWS.iter().find(|c| c.n == r.n && c.k == r.n - r.k && c.d == r.d) {
            notes.push(format!(
                "reference table reports {}, but complementing every codeword maps ({},{},{}) codes onto ({},{},{}) codes, for which it reports {}",
                r.size, r.n, r.k, r.d, c.n, c.k, c.d, c.size
            ));
        } else {
            notes.push(format!("reference table reports {}", r.size));
        }
    }

    let ours = match r.column {
        "J1" => j1,
        _ => j2,
    };
    match ours {
        Some(v) if v == r.bound => {}
        Some(v) => notes.push(format!("reference table lists {} = {}, computed {}", r.column, r.bound, v)),
        None => notes.push(format!(
            "reference table lists {} = {}, but the restricted bound does not apply (k^2 - kn + delta*n = {})",
            r.column,
            r.bound,
            bounds::johnson1_denominator(n, k, d / 2)
        )),
    }

    let mut count = None;
    if opts.count && res.complete {
        let left = opts.budget.saturating_sub(start.elapsed());
        match count_maximum_cliques(&graph, res.max_size, opts.cap, Some(left)) {
            Ok(c) => {
                if let CliqueCount::Capped(_) = c {
                    notes.push(format!("count stopped at cap {}", opts.cap));
                }
                if c != CliqueCount::Exact(r.n_max) {
                    notes.push(if r.starred {
                        "reference count is for subgraphs of its own (smaller) size; this counts maximum cliques".into()
                    } else {
                        format!("count differs from reference count {}", r.n_max)
                    });
                }
                count = Some(c);
            }
            Err(_) => notes.push("count skipped: time budget exhausted".into()),
        }
    }

    RowReport {
        n: r.n,
        k: r.k,
        d: r.d,
        reference_size: r.size,
        size: res.max_size,
        complete: res.complete,
        status,
        johnson1: j1,
        johnson2: j2,
        best_upper: best,
        reference_column: r.column,
        reference_bound: r.bound,
        count,
        reference_count: r.n_max,
        notes,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

fn opt(v: Option<u128>) -> String {
    v.map_or("-".into(), |v| v.to_string())
}

pub fn render(rows: &[RowReport]) -> String {
    let mut s = format!(
        "{:<10} {:>5} {:>5} {:<12} {:>4} {:>4} {:>5} {:>9} {:>9}\n",
        "(n,k,d)", "ref", "found", "status", "J1", "J2", "upper", "count", "ref count"
    );
    for r in rows {
        let count = match r.count {
            Some(CliqueCount::Exact(c)) => c.to_string(),
            Some(CliqueCount::Capped(c)) => format!(">={c}"),
            None => "-".into(),
        };
        s += &format!(
            "{:<10} {:>5} {:>5} {:<12} {:>4} {:>4} {:>5} {:>9} {:>9}\n",
            format!("({},{},{})", r.n, r.k, r.d),
            r.reference_size,
            r.size,
            r.status,
            opt(r.johnson1),
            opt(r.johnson2),
            opt(r.best_upper),
            count,
            r.reference_count
        );
        for note in &r.notes {
            s += &format!("           note: {note}\n");
        }
    }
    s
}
