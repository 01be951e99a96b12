// SPDX-License-Identifier: Apache-2.0

//! Contingency tables of sequential-measurement counts.
//!
//! Comma-separated, `#` comment lines allowed, fixed header
//! `experiment,outcome_a,outcome_b,count`. Experiments:
//!
//! - `b`: b measured directly in the context (`outcome_a` empty)
//! - `a`: a measured in the context (`outcome_b` empty)
//! - `ab`: b measured after selecting on a (both outcomes set)
//!
//! When no `a` rows are present the a counts are the row totals of `ab`.
//! Repeated rows are summed.

use ctxprob::ContextualStatistics;

use crate::error::{IngestError, Result};

pub const HEADER: [&str; 4] = ["experiment", "outcome_a", "outcome_b", "count"];

#[derive(Default)]
struct Labels(Vec<String>);

impl Labels {
    fn index(&mut self, label: &str) -> usize {
        match self.0.iter().position(|l| l == label) {
            Some(i) => i,
            None => {
                self.0.push(label.to_owned());
                self.0.len() - 1
            }
        }
    }
}

enum Row {
    B(usize, u64),
    A(usize, u64),
    Ab(usize, usize, u64),
}

pub fn ingest_contingency_table(bytes: &[u8]) -> Result<ContextualStatistics> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(bytes);

    let header = reader.headers().map_err(|e| IngestError::Parse {
        path: "header".into(),
        message: e.to_string(),
    })?;
    if header.iter().ne(HEADER) {
        return Err(IngestError::schema(
            "header",
            format!(
                "expected {:?}, found {:?}",
                HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut a_labels = Labels::default();
    let mut b_labels = Labels::default();
    let mut rows = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let record = record.map_err(|e| IngestError::Parse {
            path: format!("row {}", n + 1),
            message: e.to_string(),
        })?;
        let path = match record.position() {
            Some(pos) => format!("line {}", pos.line()),
            None => format!("row {}", n + 1),
        };
        let (exp, oa, ob, raw) = (&record[0], &record[1], &record[2], &record[3]);
        let count: i64 = raw
            .parse()
            .map_err(|_| IngestError::schema(&path, format!("count {raw:?} is not an integer")))?;
        if count < 0 {
            return Err(IngestError::schema(
                &path,
                format!("negative count {count}"),
            ));
        }
        let count = count as u64;
        let require = |field: &str, value: &str, present: bool| {
            if present == value.is_empty() {
                let want = if present { "required" } else { "must be empty" };
                Err(IngestError::schema(
                    &path,
                    format!("{field} {want} for experiment {exp:?}"),
                ))
            } else {
                Ok(())
            }
        };
        rows.push(match exp {
            "b" => {
                require("outcome_a", oa, false)?;
                require("outcome_b", ob, true)?;
                Row::B(b_labels.index(ob), count)
            }
            "a" => {
                require("outcome_a", oa, true)?;
                require("outcome_b", ob, false)?;
                Row::A(a_labels.index(oa), count)
            }
            "ab" => {
                require("outcome_a", oa, true)?;
                require("outcome_b", ob, true)?;
                Row::Ab(a_labels.index(oa), b_labels.index(ob), count)
            }
            other => {
                return Err(IngestError::schema(
                    &path,
                    format!("unknown experiment {other:?}, expected b, a or ab"),
                ))
            }
        });
    }

    for (what, labels) in [("a", &a_labels), ("b", &b_labels)] {
        if labels.0.len() != 2 {
            return Err(IngestError::schema(
                "table",
                format!("expected exactly 2 {what}-outcomes, found {:?}", labels.0),
            ));
        }
    }

    let mut b_counts = [0u64; 2];
    let mut a_counts: Option<[u64; 2]> = None;
    let mut after = [[0u64; 2]; 2];
    for row in rows {
        match row {
            Row::B(j, c) => b_counts[j] += c,
            Row::A(i, c) => a_counts.get_or_insert([0, 0])[i] += c,
            Row::Ab(i, j, c) => after[i][j] += c,
        }
    }
    let a_counts = a_counts.unwrap_or([after[0][0] + after[0][1], after[1][0] + after[1][1]]);

    let b_total: u64 = b_counts.iter().sum();
    if b_total == 0 {
        return Err(IngestError::DegenerateData("no b-only counts".into()));
    }
    for (i, &c) in a_counts.iter().enumerate() {
        if c == 0 {
            return Err(IngestError::DegenerateData(format!(
                "a-outcome {:?} has zero count",
                a_labels.0[i]
            )));
        }
    }
    for (i, row) in after.iter().enumerate() {
        if row.iter().sum::<u64>() == 0 {
            return Err(IngestError::DegenerateData(format!(
                "no b counts after selecting a = {:?}",
                a_labels.0[i]
            )));
        }
    }

    let ratios = |c: [u64; 2]| {
        let total = (c[0] + c[1]) as f64;
        [c[0] as f64 / total, c[1] as f64 / total]
    };
    let a_labels: [String; 2] = a_labels.0.try_into().expect("checked above");
    let b_labels: [String; 2] = b_labels.0.try_into().expect("checked above");
    ContextualStatistics::new(
        a_labels,
        b_labels,
        ratios(a_counts),
        ratios(b_counts),
        [ratios(after[0]), ratios(after[1])],
    )
    .map_err(|e| IngestError::invariant("table", e))
}
