use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use crate::error::CliError;

pub struct Table {
    /// Appended to the command name in the file name, if set.
    pub stem: Option<&'static str>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            stem: None,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Everything a subcommand produces.
#[derive(Default)]
pub struct Report {
    pub tables: Vec<Table>,
    pub summary: Vec<String>,
    /// Extra files: suffix and contents.
    pub dumps: Vec<(&'static str, String)>,
    /// Set when the run detected an invariant violation (exit code 4).
    pub violation: Option<String>,
}

pub struct RunInfo<'a> {
    pub command: &'a str,
    pub config_hash: &'a str,
    pub rng: &'a str,
    pub params: &'a toml::Table,
    pub threads: usize,
    pub wall: Duration,
}

fn csv_body(t: &Table, header: &str) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.columns).map_err(|e| CliError::Io(e.into()))?;
    for r in &t.rows {
        w.write_record(r).map_err(|e| CliError::Io(e.into()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(format!("{header}\n{}", String::from_utf8_lossy(&bytes)))
}

/// Writes all artifacts through temporary files and renames them into place
/// only once every file has been written. Returns the final paths.
pub fn write_all(dir: &Path, info: &RunInfo, report: &Report) -> Result<Vec<PathBuf>, CliError> {
    let header = format!("# config_hash={} rng={}", info.config_hash, info.rng);
    let mut files: Vec<(String, String)> = Vec::new();
    for t in &report.tables {
        let name = match t.stem {
            Some(s) => format!("{}.{s}.csv", info.command),
            None => format!("{}.csv", info.command),
        };
        files.push((name, csv_body(t, &header)?));
    }
    for (suffix, body) in &report.dumps {
        files.push((format!("{}.{suffix}", info.command), body.clone()));
    }
    let started = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default().as_secs();
    let mut m = vec![
        format!("command={}", info.command),
        format!("config_hash={}", info.config_hash),
        format!("rng={}", info.rng),
        format!("version={}", env!("CARGO_PKG_VERSION")),
        format!("threads={}", info.threads),
        format!("wall_time_s={:.3}", info.wall.as_secs_f64()),
        format!("finished_unix={started}"),
        format!("files={}", files.iter().map(|f| f.0.as_str()).collect::<Vec<_>>().join(";")),
    ];
    for (k, v) in info.params {
        m.push(format!("config.{k}={v}"));
    }
    files.push((format!("{}.manifest", info.command), m.join("\n") + "\n"));

    fs::create_dir_all(dir)?;
    let pid = std::process::id();
    let mut staged = Vec::new();
    for (name, body) in &files {
        let tmp = dir.join(format!(".{name}.{pid}.tmp"));
        if let Err(e) = fs::write(&tmp, body) {
            for (t, _) in &staged {
                let _ = fs::remove_file(t);
            }
            let _ = fs::remove_file(&tmp);
            return Err(e.into());
        }
        staged.push((tmp, dir.join(name)));
    }
    let mut out = Vec::new();
    for (tmp, dest) in staged {
        fs::rename(&tmp, &dest)?;
        out.push(dest);
    }
    Ok(out)
}
