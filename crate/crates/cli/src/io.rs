use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use zenoctl_core::PauliSum;

/// Reads a Pauli-sum text file (`qubits: <n>` header, then `<coefficient> <letters>` lines).
pub fn parse_pauli_file(path: &Path) -> Result<PauliSum> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    PauliSum::parse_text(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_pauli_file(path: &Path, sum: &PauliSum) -> Result<()> {
    write_atomic(path, sum.to_text()?.as_bytes())
}

/// Writes to a temporary file in the destination directory, then renames it
/// over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("renaming output onto {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.txt");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn parse_errors_carry_path_and_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.pauli");
        fs::write(&path, "qubits: 2\n1.0 XXX\n").unwrap();
        let err = format!("{:#}", parse_pauli_file(&path).unwrap_err());
        assert!(err.contains("bad.pauli") && err.contains("line 2"), "{err}");
    }
}
