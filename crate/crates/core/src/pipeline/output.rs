use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::PipelineError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

/// Output files of one run. Everything is first written under a `.partial`
/// name and only renamed into place by [`commit`](Self::commit); dropping an
/// uncommitted set deletes what it wrote.
pub struct Artifacts {
    dir: PathBuf,
    pending: Vec<(PathBuf, PathBuf)>,
    committed: bool,
}

impl Artifacts {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, PipelineError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| PipelineError::io(&dir, e))?;
        Ok(Self {
            dir,
            pending: Vec::new(),
            committed: false,
        })
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>, PipelineError> {
        let target = self.dir.join(name);
        if let Some(parent) = target.parent() {
            fs::create_dir_all(parent).map_err(|e| PipelineError::io(parent, e))?;
        }
        let partial = target.with_file_name(format!(
            "{}.partial",
            target.file_name().and_then(|n| n.to_str()).unwrap_or("out")
        ));
        let file = File::create(&partial).map_err(|e| PipelineError::io(&partial, e))?;
        self.pending.push((partial, target));
        Ok(BufWriter::new(file))
    }

    /// Writes `rows` as `<stem>.csv` or `<stem>.json`.
    pub fn table<T: Serialize>(
        &mut self,
        stem: &str,
        format: OutputFormat,
        rows: &[T],
    ) -> Result<(), PipelineError> {
        let name = format!("{stem}.{}", format.extension());
        let out = self.create(&name)?;
        match format {
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                for row in rows {
                    w.serialize(row)?;
                }
                w.flush().map_err(|e| PipelineError::io(&name, e))?;
            }
            OutputFormat::Json => {
                let mut out = out;
                serde_json::to_writer_pretty(&mut out, rows)?;
                out.write_all(b"\n")
                    .map_err(|e| PipelineError::io(&name, e))?;
                out.flush().map_err(|e| PipelineError::io(&name, e))?;
            }
        }
        Ok(())
    }

    pub fn json<T: Serialize + ?Sized>(
        &mut self,
        name: &str,
        value: &T,
    ) -> Result<(), PipelineError> {
        let mut out = self.create(name)?;
        serde_json::to_writer_pretty(&mut out, value)?;
        out.write_all(b"\n")
            .map_err(|e| PipelineError::io(name, e))?;
        out.flush().map_err(|e| PipelineError::io(name, e))?;
        Ok(())
    }

    /// Raw writer for formats that are not row tables.
    pub fn with_writer(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut BufWriter<File>) -> Result<(), PipelineError>,
    ) -> Result<(), PipelineError> {
        let mut out = self.create(name)?;
        f(&mut out)?;
        out.flush().map_err(|e| PipelineError::io(name, e))?;
        Ok(())
    }

    /// Moves every partial file into place and returns the final paths.
    pub fn commit(mut self) -> Result<Vec<PathBuf>, PipelineError> {
        let mut done = Vec::with_capacity(self.pending.len());
        for (partial, target) in &self.pending {
            fs::rename(partial, target).map_err(|e| PipelineError::io(target, e))?;
            done.push(target.clone());
        }
        self.committed = true;
        Ok(done)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

impl Drop for Artifacts {
    fn drop(&mut self) {
        if !self.committed {
            for (partial, _) in &self.pending {
                let _ = fs::remove_file(partial);
            }
        }
    }
}
