use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::build::marginals;
use super::{CellTable, Child, FamilyOutcome, Regime, SampleSpaceError, Slot};
use crate::ratfunc::{round_half_even, to_decimal, Rational, RationalFunction};

/// A table evaluated exactly at one value of `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericTable {
    pub regime: Regime,
    pub r: Rational,
    pub children: Vec<Child>,
    /// `cells[i][j]` is (eldest = children[i], youngest = children[j]);
    /// `None` marks an outcome impossible by construction.
    pub cells: Vec<Vec<Option<Rational>>>,
    pub row_margins: Vec<Rational>,
    pub col_margins: Vec<Rational>,
    pub total: Rational,
}

/// A cell whose printed value disagrees with the computed one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub row: String,
    pub column: String,
    pub printed: String,
    pub computed: String,
}

impl NumericTable {
    /// Evaluates every cell at `r`, rejecting values outside the
    /// regime's admissible interval.
    pub fn evaluate<T: CellTable + ?Sized>(table: &T, r: &Rational) -> Result<Self, SampleSpaceError> {
        let regime = *table.regime();
        regime.check_admissible(r)?;
        let children = regime.children();
        let mut cells = Vec::with_capacity(children.len());
        for &e in &children {
            let mut row = Vec::with_capacity(children.len());
            for &y in &children {
                let value = match table.cell(&FamilyOutcome::new(e, y)) {
                    Some(p) => Some(p.eval_at(r)?),
                    None => None,
                };
                row.push(value);
            }
            cells.push(row);
        }
        let sum = |it: &mut dyn Iterator<Item = Option<Rational>>| -> Rational {
            it.flatten().fold(Rational::zero(), |a, b| a + b)
        };
        let n = children.len();
        let row_margins: Vec<Rational> = (0..n)
            .map(|i| sum(&mut cells[i].iter().cloned()))
            .collect();
        let col_margins: Vec<Rational> = (0..n)
            .map(|j| sum(&mut cells.iter().map(|row| row[j].clone())))
            .collect();
        let total = row_margins.iter().fold(Rational::zero(), |a, b| a + b);
        Ok(NumericTable {
            regime,
            r: r.clone(),
            children,
            cells,
            row_margins,
            col_margins,
            total,
        })
    }

    /// The `(n+1) x (n+1)` grid including the margin row and column.
    pub fn grid(&self) -> Vec<Vec<Option<Rational>>> {
        let mut out: Vec<Vec<Option<Rational>>> = self
            .cells
            .iter()
            .zip(&self.row_margins)
            .map(|(row, m)| {
                let mut row = row.clone();
                row.push(Some(m.clone()));
                row
            })
            .collect();
        let mut last: Vec<Option<Rational>> = self.col_margins.iter().cloned().map(Some).collect();
        last.push(Some(self.total.clone()));
        out.push(last);
        out
    }

    fn labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self
            .children
            .iter()
            .map(|c| c.label(self.regime.alias))
            .collect();
        labels.push("any".to_string());
        labels
    }

    pub fn render(&self, digits: usize) -> String {
        let labels = self.labels();
        let rows = self
            .grid()
            .iter()
            .zip(&labels)
            .map(|(row, label)| {
                std::iter::once(label.clone())
                    .chain(row.iter().map(|v| match v {
                        Some(v) => to_decimal(v, digits),
                        None => "-".to_string(),
                    }))
                    .collect()
            })
            .collect();
        format_grid(&header(&labels), &rows)
    }

    /// Expected counts in `families` families, each rounded half-even.
    pub fn counts(&self, families: u64) -> CountTable {
        let n = Rational::from_integer(families.into());
        let grid = self
            .grid()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| {
                        v.map(|p| {
                            round_half_even(&(p * &n))
                                .to_u64()
                                .expect("count within u64 for an admissible table")
                        })
                    })
                    .collect()
            })
            .collect();
        CountTable {
            families,
            labels: self.labels(),
            grid,
        }
    }

    /// Compares a printed `(n+1) x (n+1)` grid (margins included, `-` for
    /// impossible cells) against this table rendered at `digits` places.
    pub fn discrepancies(&self, printed: &[Vec<&str>], digits: usize) -> Vec<Discrepancy> {
        let labels = self.labels();
        let mut out = Vec::new();
        for (i, row) in self.grid().iter().enumerate() {
            for (j, value) in row.iter().enumerate() {
                let computed = value
                    .as_ref()
                    .map_or_else(|| "-".to_string(), |v| to_decimal(v, digits));
                let shown = printed.get(i).and_then(|r| r.get(j)).copied().unwrap_or("");
                if shown.trim() != computed {
                    out.push(Discrepancy {
                        row: labels[i].clone(),
                        column: labels[j].clone(),
                        printed: shown.to_string(),
                        computed,
                    });
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub families: u64,
    /// Row and column labels; the last one is the margin.
    pub labels: Vec<String>,
    pub grid: Vec<Vec<Option<u64>>>,
}

impl CountTable {
    pub fn render(&self) -> String {
        let rows = self
            .grid
            .iter()
            .zip(&self.labels)
            .map(|(row, label)| {
                std::iter::once(label.clone())
                    .chain(row.iter().map(|v| v.map_or("-".to_string(), |c| c.to_string())))
                    .collect()
            })
            .collect();
        format_grid(&header(&self.labels), &rows)
    }
}

fn header(labels: &[String]) -> Vec<String> {
    std::iter::once("E \\ Y".to_string())
        .chain(labels.iter().cloned())
        .collect()
}

/// Right-aligned plain-text grid.
pub fn format_grid(header: &[String], rows: &Vec<Vec<String>>) -> String {
    let ncols = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (j, cell) in row.iter().enumerate().take(ncols) {
            widths[j] = widths[j].max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .enumerate()
            .map(|(j, c)| format!("{:>w$}", c, w = widths[j]))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(header);
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (ncols - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

/// One exported cell: exact string plus an optional decimal rendering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExportCell {
    pub exact: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
}

/// Machine-readable form of a table, keyed by child descriptors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableExport {
    pub caption: String,
    pub regime: String,
    pub alias_label: Option<String>,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    /// `null` for impossible cells.
    pub cells: Vec<Vec<Option<ExportCell>>>,
    pub row_margins: Vec<ExportCell>,
    pub column_margins: Vec<ExportCell>,
    pub total: ExportCell,
}

impl TableExport {
    /// `valid` is false for tables that are not genuine distributions.
    pub fn new<T: CellTable + ?Sized>(
        table: &T,
        valid: bool,
        at: Option<(&Rational, usize)>,
    ) -> Result<Self, SampleSpaceError> {
        let regime = *table.regime();
        if let Some((r, _)) = at {
            regime.check_admissible(r)?;
        }
        let export = |p: &RationalFunction| -> Result<ExportCell, SampleSpaceError> {
            let decimal = match at {
                Some((r, digits)) => Some(to_decimal(&p.eval_at(r)?, digits)),
                None => None,
            };
            Ok(ExportCell {
                exact: p.to_string(),
                decimal,
            })
        };
        let children = regime.children();
        let keys: Vec<String> = children.iter().map(Child::descriptor).collect();
        let mut cells = Vec::new();
        for &e in &children {
            let mut row = Vec::new();
            for &y in &children {
                row.push(match table.cell(&FamilyOutcome::new(e, y)) {
                    Some(p) => Some(export(p)?),
                    None => None,
                });
            }
            cells.push(row);
        }
        let rows_m = marginals(table, Slot::Eldest);
        let cols_m = marginals(table, Slot::Youngest);
        let total: RationalFunction = table.cells().values().sum();
        Ok(TableExport {
            caption: table.title(),
            regime: regime.kind.code().to_string(),
            alias_label: regime.alias.map(|a| match a {
                super::AliasLabel::Name => "name".to_string(),
                super::AliasLabel::Identification => "identification".to_string(),
            }),
            valid,
            r: at.map(|(r, _)| r.to_string()),
            rows: keys.clone(),
            columns: keys,
            cells,
            row_margins: children.iter().map(|c| export(&rows_m[c])).collect::<Result<_, _>>()?,
            column_margins: children.iter().map(|c| export(&cols_m[c])).collect::<Result<_, _>>()?,
            total: export(&total)?,
        })
    }

    /// Long-form records `eldest, youngest, exact, decimal`; margins use
    /// `any` in place of a descriptor.
    pub fn records(&self) -> Vec<[String; 4]> {
        let dec = |c: &ExportCell| c.decimal.clone().unwrap_or_default();
        let mut out = Vec::new();
        for (i, row) in self.cells.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                let (exact, decimal) = match cell {
                    Some(c) => (c.exact.clone(), dec(c)),
                    None => ("-".to_string(), String::new()),
                };
                out.push([self.rows[i].clone(), self.columns[j].clone(), exact, decimal]);
            }
        }
        for (i, m) in self.row_margins.iter().enumerate() {
            out.push([self.rows[i].clone(), "any".into(), m.exact.clone(), dec(m)]);
        }
        for (j, m) in self.column_margins.iter().enumerate() {
            out.push(["any".into(), self.columns[j].clone(), m.exact.clone(), dec(m)]);
        }
        out.push(["any".into(), "any".into(), self.total.exact.clone(), dec(&self.total)]);
        out
    }

    /// Symbolic plain-text rendering with margins.
    pub fn render(&self, labels: &[String]) -> String {
        let show = |c: &ExportCell| match &c.decimal {
            Some(d) => format!("{} ({d})", c.exact),
            None => c.exact.clone(),
        };
        let mut all_labels = labels.to_vec();
        all_labels.push("any".to_string());
        let mut rows: Vec<Vec<String>> = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, row)| {
                std::iter::once(all_labels[i].clone())
                    .chain(row.iter().map(|c| c.as_ref().map_or("-".to_string(), show)))
                    .chain(std::iter::once(show(&self.row_margins[i])))
                    .collect()
            })
            .collect();
        rows.push(
            std::iter::once("any".to_string())
                .chain(self.column_margins.iter().map(show))
                .chain(std::iter::once(show(&self.total)))
                .collect(),
        );
        format_grid(&header(&all_labels), &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplespace::build_distribution;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn shared_names_at_one_fiftieth() {
        let d = build_distribution(Regime::shared_names());
        let t = NumericTable::evaluate(&d, &q(1, 50)).unwrap();
        assert_eq!(to_decimal(t.cells[1][1].as_ref().unwrap(), 4), "0.0001");
        assert_eq!(to_decimal(t.cells[2][2].as_ref().unwrap(), 4), "0.2401");
        assert_eq!(t.total, q(1, 1));
        let counts = t.counts(10_000);
        let row = |i: usize| counts.grid[i].iter().map(|c| c.unwrap()).collect::<Vec<_>>();
        assert_eq!(row(0), [2500, 50, 2450, 5000]);
        assert_eq!(row(1), [50, 1, 49, 100]);
        assert_eq!(row(2), [2450, 49, 2401, 4900]);
        assert_eq!(row(3), [5000, 100, 4900, 10000]);
    }

    #[test]
    fn unique_names_rejects_half() {
        let d = build_distribution(Regime::unique_names());
        assert!(matches!(
            NumericTable::evaluate(&d, &q(1, 2)),
            Err(SampleSpaceError::Inadmissible { .. })
        ));
    }

    #[test]
    fn impossible_cell_is_dash() {
        let d = build_distribution(Regime::unique_names());
        let t = NumericTable::evaluate(&d, &q(1, 10)).unwrap();
        assert!(t.cells[1][1].is_none());
        assert!(t.render(4).contains('-'));
        assert_eq!(t.counts(1).grid[1][1], None);
    }

    #[test]
    fn export_keys_and_records() {
        let d = build_distribution(Regime::shared_names());
        let e = TableExport::new(&d, true, Some((&q(1, 50), 4))).unwrap();
        assert_eq!(e.rows, ["m", "fN", "f!N"]);
        let c = e.cells[1][1].as_ref().unwrap();
        assert_eq!(c.exact, "r^2/4");
        assert_eq!(c.decimal.as_deref(), Some("0.0001"));
        assert_eq!(e.records().len(), 9 + 3 + 3 + 1);
        assert_eq!(e.total.exact, "1");
    }
}
