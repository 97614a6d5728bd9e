use std::fmt::Write as _;

use serde::Serialize;

use super::{QuestionSet, QuestionType};

/// Number of questions per type in one partition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub yesno: usize,
    pub factoid: usize,
    pub list: usize,
    pub summary: usize,
}

impl CorpusStats {
    pub fn total(&self) -> usize {
        self.yesno + self.factoid + self.list + self.summary
    }

    pub fn count(&self, qtype: QuestionType) -> usize {
        match qtype {
            QuestionType::Yesno => self.yesno,
            QuestionType::Factoid => self.factoid,
            QuestionType::List => self.list,
            QuestionType::Summary => self.summary,
        }
    }

    pub fn csv_header() -> &'static str {
        "partition,yesno,factoid,list,summary,total"
    }

    pub fn csv_row(&self, label: &str) -> String {
        format!(
            "{label},{},{},{},{},{}",
            self.yesno,
            self.factoid,
            self.list,
            self.summary,
            self.total()
        )
    }

    /// Fixed-width table, one row per labelled partition.
    pub fn render_table(rows: &[(&str, CorpusStats)]) -> String {
        let width = rows
            .iter()
            .map(|(l, _)| l.chars().count())
            .chain(std::iter::once("Partition".len()))
            .max()
            .unwrap_or(9);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>6}  {:>6}  {:>6}  {:>6}  {:>6}",
            "Partition", "y/n", "fact", "list", "sum", "total"
        );
        for (label, s) in rows {
            let _ = writeln!(
                out,
                "{:<width$}  {:>6}  {:>6}  {:>6}  {:>6}  {:>6}",
                label,
                s.yesno,
                s.factoid,
                s.list,
                s.summary,
                s.total()
            );
        }
        out
    }
}

pub fn statistics(set: &QuestionSet) -> CorpusStats {
    let mut stats = CorpusStats::default();
    for q in &set.questions {
        match q.qtype {
            QuestionType::Yesno => stats.yesno += 1,
            QuestionType::Factoid => stats.factoid += 1,
            QuestionType::List => stats.list += 1,
            QuestionType::Summary => stats.summary += 1,
        }
    }
    stats
}
