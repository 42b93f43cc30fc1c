use std::fs;
use std::io::Write;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use crate::{Format, GlobalArgs};

/// A command result in every format it supports.
pub struct Rendered {
    pub text: String,
    pub json: String,
    pub csv: Option<String>,
}

impl Rendered {
    pub fn new<T: Serialize>(text: String, value: &T) -> Result<Self> {
        Ok(Self {
            text,
            json: serde_json::to_string_pretty(value)?,
            csv: None,
        })
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

/// CSV text from a header and rows.
pub fn csv_string<I, R>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn emit(global: &GlobalArgs, r: Rendered) -> Result<()> {
    let mut body = match global.format {
        Format::Text => r.text,
        Format::Json => r.json,
        Format::Csv => match r.csv {
            Some(c) => c,
            None => bail!("this command has no CSV output; use --format text or json"),
        },
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &global.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}
