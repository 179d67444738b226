use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::CliError;

/// Output directory guarded against accidental overwrites.
pub struct OutDir {
    root: PathBuf,
    force: bool,
}

impl OutDir {
    /// Creates `root` if needed. Fails if it is a file, or if any of
    /// `files` already exists and `force` is off.
    pub fn prepare(root: &Path, files: &[&str], force: bool) -> Result<Self, CliError> {
        if root.exists() && !root.is_dir() {
            return Err(CliError::input("cli::OutputNotDirectory", format!("{} is not a directory", root.display())));
        }
        if !force {
            if let Some(f) = files.iter().find(|f| root.join(f).exists()) {
                return Err(CliError::input(
                    "cli::OutputExists",
                    format!("{} already exists (use --force to overwrite)", root.join(f).display()),
                ));
            }
        }
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            force,
        })
    }

    /// Like [`prepare`](Self::prepare) but the whole directory must be
    /// empty or absent.
    pub fn prepare_empty(root: &Path, force: bool) -> Result<Self, CliError> {
        if !force && root.is_dir() {
            let mut entries = fs::read_dir(root).map_err(|e| CliError::io(root, e))?;
            if entries.next().is_some() {
                return Err(CliError::input(
                    "cli::OutputExists",
                    format!("{} is not empty (use --force to overwrite)", root.display()),
                ));
            }
        }
        Self::prepare(root, &[], force)
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn write(&self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        if !self.force && path.exists() {
            return Err(CliError::input(
                "cli::OutputExists",
                format!("{} already exists (use --force to overwrite)", path.display()),
            ));
        }
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        println!("wrote {}", path.display());
        Ok(path)
    }

    pub fn write_json(&self, name: &str, value: &impl serde::Serialize) -> Result<PathBuf, CliError> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::compute("cli::Json", e.to_string()))?;
        bytes.push(b'\n');
        self.write(name, &bytes)
    }
}

/// `progress command=<c> done=<i> total=<n>` lines on stderr, about one per
/// percent.
pub struct Progress {
    command: &'static str,
    total: usize,
    stride: usize,
    done: AtomicUsize,
    quiet: bool,
}

impl Progress {
    pub fn new(command: &'static str, total: usize, quiet: bool) -> Self {
        Self {
            command,
            total,
            stride: (total / 100).max(1),
            done: AtomicUsize::new(0),
            quiet,
        }
    }

    pub fn tick(&self) {
        let done = self.done.fetch_add(1, Ordering::Relaxed) + 1;
        if !self.quiet && (done % self.stride == 0 || done == self.total) {
            eprintln!("progress command={} done={done} total={}", self.command, self.total);
        }
    }

    pub fn note(&self, message: &str) {
        if !self.quiet {
            eprintln!("progress command={} {message}", self.command);
        }
    }
}
