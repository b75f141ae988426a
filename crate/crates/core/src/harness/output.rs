use std::path::{Path, PathBuf};

use super::config::OutputFormat;
use super::run::ResultRecord;
use crate::Result;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_json_string(record: &ResultRecord) -> Result<String> {
    Ok(serde_json::to_string_pretty(record)?)
}

pub fn from_json_str(s: &str) -> Result<ResultRecord> {
    Ok(serde_json::from_str(s)?)
}

/// Grid table: one header row, one row per grid point.
///
/// Each observable contributes a value column and a `<name>_se` column.
pub fn points_csv(record: &ResultRecord) -> Result<String> {
    let mut names: Vec<String> = Vec::new();
    for p in &record.points {
        for o in &p.observables {
            if !names.contains(&o.name) {
                names.push(o.name.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["index".to_string(), "lambda".into(), "epsilon".into()];
    for n in &names {
        header.push(n.clone());
        header.push(format!("{n}_se"));
    }
    w.write_record(&header)?;
    for p in &record.points {
        let mut row = vec![p.index.to_string(), p.lambda.map(num).unwrap_or_default(), num(p.epsilon)];
        for n in &names {
            match p.get(n) {
                Some(o) => {
                    row.push(num(o.value));
                    row.push(o.std_error.map(num).unwrap_or_default());
                }
                None => row.extend([String::new(), String::new()]),
            }
        }
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is UTF-8"))
}

/// Histogram table: one row per bin of every grid point that carries a histogram.
pub fn histogram_csv(record: &ResultRecord) -> Result<Option<String>> {
    if record.points.iter().all(|p| p.histogram.is_none()) {
        return Ok(None);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "lo", "hi", "count", "density"])?;
    for p in &record.points {
        if let Some(h) = &p.histogram {
            for (i, e) in h.edges.windows(2).enumerate() {
                w.write_record([
                    p.index.to_string(),
                    num(e[0]),
                    num(e[1]),
                    h.counts[i].to_string(),
                    num(h.density[i]),
                ])?;
            }
        }
    }
    Ok(Some(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is UTF-8")))
}

/// Sibling path `<stem>_hist.csv` for the histogram table.
pub fn histogram_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "result".into());
    path.with_file_name(format!("{stem}_hist.csv"))
}

/// Writes the record and returns the files created.
pub fn emit(record: &ResultRecord, format: OutputFormat, path: &Path) -> Result<Vec<PathBuf>> {
    match format {
        OutputFormat::Json => {
            std::fs::write(path, to_json_string(record)?)?;
            Ok(vec![path.to_path_buf()])
        }
        OutputFormat::Csv => {
            std::fs::write(path, points_csv(record)?)?;
            let mut out = vec![path.to_path_buf()];
            if let Some(h) = histogram_csv(record)? {
                let hp = histogram_path(path);
                std::fs::write(&hp, h)?;
                out.push(hp);
            }
            Ok(out)
        }
    }
}
