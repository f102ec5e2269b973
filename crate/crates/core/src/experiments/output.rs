//! CSV and plotting-script emission.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// A CSV file written row by row. Floats use the shortest round-trip
/// representation, so output is byte-identical across runs.
pub struct CsvTable {
    path: PathBuf,
    writer: csv::Writer<fs::File>,
}

impl CsvTable {
    pub fn create(dir: &Path, file_name: &str, header: &[&str]) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(file_name);
        let mut writer = csv::Writer::from_path(&path)?;
        writer.write_record(header)?;
        Ok(CsvTable { path, writer })
    }

    pub fn row(&mut self, fields: &[Field]) -> Result<()> {
        self.writer
            .write_record(fields.iter().map(Field::render))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.writer.flush()?;
        Ok(self.path)
    }
}

pub enum Field<'a> {
    F(f64),
    U(u64),
    S(&'a str),
}

impl Field<'_> {
    fn render(&self) -> String {
        match self {
            Field::F(v) => format_float(*v),
            Field::U(v) => v.to_string(),
            Field::S(s) => s.to_string(),
        }
    }
}

pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        // drop the sign of negative zero
        "0".into()
    } else {
        format!("{v}")
    }
}

/// Write a matplotlib script next to the CSVs.
pub fn write_plot_script(dir: &Path, file_name: &str, body: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(file_name);
    let script = format!(
        "#!/usr/bin/env python3\n\
         # Regenerate with `python3 {file_name}` from this directory.\n\
         import csv\n\
         import os\n\
         from collections import defaultdict\n\n\
         import matplotlib\n\
         matplotlib.use(\"Agg\")\n\
         import matplotlib.pyplot as plt\n\n\
         HERE = os.path.dirname(os.path.abspath(__file__))\n\n\n\
         def read(name):\n    \
             with open(os.path.join(HERE, name), newline=\"\") as f:\n        \
                 return list(csv.DictReader(f))\n\n\n\
         {body}"
    );
    fs::write(&path, script)?;
    Ok(path)
}

pub(crate) fn check(condition: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if condition {
        Ok(())
    } else {
        Err(Error::InvariantViolation(msg()))
    }
}
