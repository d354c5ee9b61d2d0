//! Atomic persistence of search states.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

use super::SearchState;

pub const SCHEMA: &str = "covgen/1";

/// Writes `state` next to `path` and renames it into place, so readers never
/// see a partial file.
pub fn save_state(state: &SearchState, path: &Path) -> Result<()> {
    let json = state.to_json()?;
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::Usage(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", file_name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(json.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_state(path: &Path) -> Result<SearchState> {
    let text = fs::read_to_string(path)?;
    SearchState::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{run_search, Mode, SearchConfig};

    #[test]
    fn save_then_load_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        let s = run_search(&SearchConfig::new(5, 4, Mode::Generic)).unwrap();
        save_state(&s, &path).unwrap();
        let first = fs::read_to_string(&path).unwrap();
        let loaded = load_state(&path).unwrap();
        assert_eq!(loaded, s);
        save_state(&loaded, &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), first);
        // no temporary file left behind
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn unreadable_files_are_errors() {
        let dir = tempfile::tempdir().unwrap();
        assert!(load_state(&dir.path().join("missing.json")).is_err());
        let path = dir.path().join("junk.json");
        fs::write(&path, "{\"schema\": 3").unwrap();
        assert!(load_state(&path).is_err());
    }
}
