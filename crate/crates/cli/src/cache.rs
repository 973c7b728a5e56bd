//! Content-addressed result cache. Entries are `<digest>.json` files holding
//! the payload and its own checksum; anything that fails to verify is
//! deleted and recomputed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct Entry {
    input_digest: String,
    payload_digest: String,
    payload: Value,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, digest: &str) -> PathBuf {
        self.dir.join(format!("{digest}.json"))
    }

    /// The cached payload for `digest`, if present and intact.
    pub fn get(&self, digest: &str) -> Option<Value> {
        let path = self.path(digest);
        let bytes = fs::read(&path).ok()?;
        let entry = serde_json::from_slice::<Entry>(&bytes).ok().filter(|e| {
            e.input_digest == digest
                && serde_json::to_vec(&e.payload).is_ok_and(|b| sha256_hex(&b) == e.payload_digest)
        });
        if entry.is_none() {
            // Corrupt or foreign: never serve it.
            let _ = fs::remove_file(&path);
        }
        entry.map(|e| e.payload)
    }

    /// Writes through a temporary file and renames it into place.
    pub fn put(&self, digest: &str, payload: &Value) -> std::io::Result<()> {
        let bytes = serde_json::to_vec(payload)?;
        let entry = Entry { input_digest: digest.to_string(), payload_digest: sha256_hex(&bytes), payload: payload.clone() };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.flush()?;
        tmp.persist(self.path(digest)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let payload = serde_json::json!({"rows": [1, 2, 3]});
        cache.put("abc", &payload).unwrap();
        assert_eq!(cache.get("abc"), Some(payload));
        let path = dir.path().join("abc.json");
        let text = fs::read_to_string(&path).unwrap().replace("[1,2,3]", "[1,2,4]");
        fs::write(&path, text).unwrap();
        assert_eq!(cache.get("abc"), None);
        assert!(!path.exists());
        assert_eq!(cache.get("missing"), None);
    }
}
