use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest decimal that parses back to the same f64.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Ordered `name = value` pairs echoed into every output header.
#[derive(Debug, Default)]
pub struct Echo(Vec<(String, String)>);

impl Echo {
    pub fn new(command: &str) -> Self {
        let mut e = Echo::default();
        e.text("tool", format!("meanforce {VERSION}"));
        e.text("command", command);
        e.text("units", "Omega_S = hbar = k_B = 1");
        e
    }

    pub fn text(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn value(&mut self, key: &str, value: f64) -> &mut Self {
        self.text(key, num(value))
    }

    pub fn list(&mut self, key: &str, values: &[f64]) -> &mut Self {
        let joined: Vec<String> = values.iter().map(|&v| num(v)).collect();
        self.text(key, joined.join(" "))
    }

    fn write_comments(&self, w: &mut dyn Write, eol: &str) -> io::Result<()> {
        for (k, v) in &self.0 {
            write!(w, "# {k} = {v}{eol}")?;
        }
        Ok(())
    }
}

pub fn open(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// RFC-4180 table: CRLF records, '#' comment header, then a column row.
pub struct Table {
    writer: csv::Writer<Box<dyn Write>>,
}

impl Table {
    pub fn create(out: Option<&Path>, echo: &Echo, columns: &[&str]) -> io::Result<Self> {
        let mut sink = open(out)?;
        echo.write_comments(&mut sink, "\r\n")?;
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .flexible(false)
            .from_writer(sink);
        writer.write_record(columns).map_err(io::Error::other)?;
        Ok(Table { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> io::Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(io::Error::other)
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.writer.flush()
    }
}

/// `key=value` report followed by the header echo as comments.
pub fn write_report(out: Option<&Path>, echo: &Echo, entries: &[(String, String)]) -> io::Result<()> {
    let mut sink = open(out)?;
    echo.write_comments(&mut sink, "\n")?;
    for (k, v) in entries {
        writeln!(sink, "{k}={v}")?;
    }
    sink.flush()
}
