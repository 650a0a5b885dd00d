use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context as _;
use serde::Serialize;

use crate::{Context, Failure};

pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *w, value).context("serializing JSON")?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn emit_json<T: Serialize>(ctx: &Context, value: &T) -> Result<(), Failure> {
    write_json(&mut *sink(ctx.output.as_deref())?, value)
}

/// Writes `rows` as CSV with the given header; `None` cells are left empty.
pub fn write_csv<I, R>(w: &mut dyn Write, header: &[&str], rows: I) -> Result<(), Failure>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = Option<f64>>,
{
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).context("writing CSV")?;
    for row in rows {
        let cells: Vec<String> = row
            .into_iter()
            // Adding zero prints -0.0 as 0.
            .map(|c| c.map(|v| (v + 0.0).to_string()).unwrap_or_default())
            .collect();
        out.write_record(&cells).context("writing CSV")?;
    }
    out.flush()?;
    Ok(())
}
