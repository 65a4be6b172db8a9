use std::path::Path;

use gateprune_core::pipeline::Dataset;
use gateprune_core::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which CSV column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelColumn {
    #[default]
    Last,
    Name(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub feature_names: Vec<String>,
    /// distinct raw label values, the first maps to -1
    pub classes: [String; 2],
    pub dataset: Dataset,
}

fn order_classes(mut values: Vec<String>) -> Vec<String> {
    let numeric: Option<Vec<f64>> = values.iter().map(|v| v.parse::<f64>().ok()).collect();
    match numeric {
        Some(nums) => {
            let mut paired: Vec<(f64, String)> = nums.into_iter().zip(values).collect();
            paired.sort_by(|a, b| a.0.total_cmp(&b.0));
            paired.into_iter().map(|(_, s)| s).collect()
        }
        None => {
            values.sort();
            values
        }
    }
}

/// Reads a headed CSV, min-max scales every feature column to `[0, 1]`
/// (constant columns become 0.5) and maps the two label values to -1/+1 in
/// sorted order.
pub fn ingest_csv(path: &Path, label: &LabelColumn) -> Result<Ingested> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.len() < 2 {
        return Err(Error::Data(format!("{}: need at least one feature and a label column", path.display())));
    }
    let label_idx = match label {
        LabelColumn::Last => header.len() - 1,
        LabelColumn::Name(name) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Data(format!("{}: no column named {name:?}", path.display())))?,
    };
    let feature_names: Vec<String> =
        header.iter().enumerate().filter(|(i, _)| *i != label_idx).map(|(_, h)| h.clone()).collect();

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        // data rows are numbered from 2 so they match a text editor
        let line = r + 2;
        if record.len() != header.len() {
            return Err(Error::Data(format!(
                "{}: row {line} has {} cells, header has {}",
                path.display(),
                record.len(),
                header.len()
            )));
        }
        let mut row = Vec::with_capacity(feature_names.len());
        for (c, cell) in record.iter().enumerate() {
            if c == label_idx {
                raw_labels.push(cell.to_string());
                continue;
            }
            let value = cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                Error::Data(format!(
                    "{}: row {line}, column {} ({}): {cell:?} is not a number",
                    path.display(),
                    c + 1,
                    header[c]
                ))
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Data(format!("{}: no data rows", path.display())));
    }

    let mut distinct: Vec<String> = Vec::new();
    for l in &raw_labels {
        if !distinct.contains(l) {
            distinct.push(l.clone());
        }
    }
    if distinct.len() != 2 {
        return Err(Error::NonBinaryLabels(distinct.len()));
    }
    let classes = order_classes(distinct);
    let labels: Vec<f64> = raw_labels.iter().map(|l| if *l == classes[0] { -1.0 } else { 1.0 }).collect();

    for c in 0..feature_names.len() {
        let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r[c]), hi.max(r[c])));
        for r in rows.iter_mut() {
            r[c] = if hi > lo { (r[c] - lo) / (hi - lo) } else { 0.5 };
        }
    }

    Ok(Ingested {
        feature_names,
        classes: [classes[0].clone(), classes[1].clone()],
        dataset: Dataset::new(rows, labels)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn scaling_and_labels() {
        let f = file("a,b,y\n0,3,yes\n10,3,no\n5,3,yes\n");
        let got = ingest_csv(f.path(), &LabelColumn::Last).unwrap();
        assert_eq!(got.dataset.features, vec![vec![0.0, 0.5], vec![1.0, 0.5], vec![0.5, 0.5]]);
        assert_eq!(got.classes, ["no".to_string(), "yes".to_string()]);
        assert_eq!(got.dataset.labels, vec![1.0, -1.0, 1.0]);
    }

    #[test]
    fn named_label_column_and_numeric_order() {
        let f = file("cls,x\n10,1\n9,2\n");
        let got = ingest_csv(f.path(), &LabelColumn::Name("cls".into())).unwrap();
        assert_eq!(got.feature_names, vec!["x"]);
        assert_eq!(got.dataset.labels, vec![1.0, -1.0]);
    }

    #[test]
    fn errors_name_the_cell() {
        let f = file("a,b,y\n0,1,0\n2,oops,1\n");
        let msg = ingest_csv(f.path(), &LabelColumn::Last).unwrap_err().to_string();
        assert!(msg.contains("row 3") && msg.contains("column 2"), "{msg}");
        let three = file("a,y\n0,0\n1,1\n2,2\n");
        assert!(matches!(ingest_csv(three.path(), &LabelColumn::Last), Err(Error::NonBinaryLabels(3))));
        assert!(ingest_csv(Path::new("/nonexistent/data.csv"), &LabelColumn::Last).is_err());
        assert!(ingest_csv(f.path(), &LabelColumn::Name("z".into())).is_err());
    }
}
