use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use super::{KnotComplexData, KnotError};
use crate::linalg::{format_rational, parse_rational, GradedMap, GradedSpace, Grading, Rational, Z2};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KnotFile {
    name: String,
    genus: u32,
    #[serde(default = "default_q")]
    q: u32,
    #[serde(default)]
    q0: i64,
    generators: Vec<GeneratorFile>,
    #[serde(default)]
    d_plus: Vec<EntryFile>,
    #[serde(default)]
    d_minus: Vec<EntryFile>,
}

fn default_q() -> u32 {
    1
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    id: String,
    alex2: i64,
    z2: u8,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    from: String,
    to: String,
    coeff: String,
}

fn schema(pointer: String, message: impl Into<String>) -> KnotError {
    KnotError::Schema { pointer, message: message.into() }
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

/// Parses and validates knot data from JSON text.
pub fn from_json_str(text: &str) -> Result<KnotComplexData, KnotError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: KnotFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = json_pointer(e.path());
        let inner = e.into_inner();
        match inner.classify() {
            Category::Data => schema(pointer, inner.to_string()),
            _ => KnotError::Parse(inner.to_string()),
        }
    })?;
    if file.q == 0 {
        return Err(schema("/q".into(), "q must be at least 1"));
    }
    let mut gens = Vec::with_capacity(file.generators.len());
    for (i, g) in file.generators.iter().enumerate() {
        if g.z2 > 1 {
            return Err(schema(format!("/generators/{i}/z2"), "z2 must be 0 or 1"));
        }
        if file.generators[..i].iter().any(|h| h.id == g.id) {
            return Err(schema(format!("/generators/{i}/id"), format!("duplicate generator id {:?}", g.id)));
        }
        gens.push((g.id.clone(), Grading::new(g.alex2, Z2::new(g.z2 as i64))));
    }
    let space = GradedSpace::from_pairs(gens).map_err(|e| schema("/generators".into(), e.to_string()))?;
    let d_plus = read_map(&space, &file.d_plus, "d_plus")?;
    let d_minus = read_map(&space, &file.d_minus, "d_minus")?;
    KnotComplexData {
        name: file.name,
        genus: file.genus as i64,
        q: file.q as i64,
        q0: file.q0,
        space,
        d_plus,
        d_minus,
    }
    .validated()
}

fn read_map(space: &GradedSpace, entries: &[EntryFile], field: &str) -> Result<GradedMap, KnotError> {
    let mut idx: Vec<(usize, usize, Rational)> = Vec::with_capacity(entries.len());
    for (i, e) in entries.iter().enumerate() {
        let from = space
            .index_of(&e.from)
            .ok_or_else(|| schema(format!("/{field}/{i}/from"), format!("unknown generator {:?}", e.from)))?;
        let to = space
            .index_of(&e.to)
            .ok_or_else(|| schema(format!("/{field}/{i}/to"), format!("unknown generator {:?}", e.to)))?;
        let c = parse_rational(&e.coeff)
            .ok_or_else(|| schema(format!("/{field}/{i}/coeff"), format!("not an exact rational: {:?}", e.coeff)))?;
        idx.push((from, to, c));
    }
    Ok(GradedMap::from_indexed(space.clone(), space.clone(), idx).expect("indices come from the space"))
}

pub fn to_json_string(k: &KnotComplexData) -> String {
    let entries = |m: &GradedMap| {
        m.labelled_entries()
            .map(|(f, t, c)| EntryFile { from: f.to_string(), to: t.to_string(), coeff: format_rational(c) })
            .collect()
    };
    let file = KnotFile {
        name: k.name.clone(),
        genus: k.genus as u32,
        q: k.q as u32,
        q0: k.q0,
        generators: k
            .space
            .generators()
            .iter()
            .map(|g| GeneratorFile { id: g.label.clone(), alex2: g.grading.alex2, z2: g.grading.h.value() })
            .collect(),
        d_plus: entries(&k.d_plus),
        d_minus: entries(&k.d_minus),
    };
    serde_json::to_string_pretty(&file).expect("knot data serializes")
}

pub fn load(path: impl AsRef<Path>) -> Result<KnotComplexData, KnotError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| KnotError::Io { path: path.display().to_string(), source })?;
    from_json_str(&text)
}

pub fn save(k: &KnotComplexData, path: impl AsRef<Path>) -> Result<(), KnotError> {
    let path = path.as_ref();
    std::fs::write(path, to_json_string(k) + "\n")
        .map_err(|source| KnotError::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::{by_name, catalog, CHECK_PLUS_RAISES};

    #[test]
    fn unknot_file() {
        let k = from_json_str(r#"{"name":"u","genus":0,"generators":[{"id":"u","alex2":0,"z2":0}]}"#).unwrap();
        assert_eq!((k.q, k.q0, k.dim()), (1, 0, 1));
        assert!(k.d_plus.is_zero() && k.d_minus.is_zero());
    }

    #[test]
    fn roundtrip_catalog() {
        for k in catalog() {
            assert_eq!(from_json_str(&to_json_string(&k)).unwrap(), k);
        }
    }

    #[test]
    fn lowering_entry_is_validation_error() {
        let text = r#"{"name":"bad","genus":1,"generators":[
            {"id":"x1","alex2":2,"z2":0},{"id":"x2","alex2":0,"z2":1},{"id":"x3","alex2":-2,"z2":0}],
            "d_plus":[{"from":"x2","to":"x3","coeff":"1"}],
            "d_minus":[{"from":"x2","to":"x3","coeff":"1"}]}"#;
        match from_json_str(text) {
            Err(KnotError::Validation(r)) => {
                assert_eq!(r.check(CHECK_PLUS_RAISES).unwrap().offenders, vec!["x2 -> x3".to_string()]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn schema_pointers() {
        let bad_coeff = r#"{"name":"t","genus":0,"generators":[{"id":"u","alex2":0,"z2":0}],
            "d_plus":[{"from":"u","to":"u","coeff":"1/0"}]}"#;
        assert!(matches!(from_json_str(bad_coeff), Err(KnotError::Schema { pointer, .. }) if pointer == "/d_plus/0/coeff"));
        let bad_type = r#"{"name":"t","genus":0,"generators":[{"id":"u","alex2":"zero","z2":0}]}"#;
        assert!(matches!(from_json_str(bad_type), Err(KnotError::Schema { pointer, .. }) if pointer == "/generators/0/alex2"));
        let bad_label = r#"{"name":"t","genus":0,"generators":[{"id":"u","alex2":0,"z2":0}],
            "d_minus":[{"from":"u","to":"v","coeff":"1"}]}"#;
        assert!(matches!(from_json_str(bad_label), Err(KnotError::Schema { pointer, .. }) if pointer == "/d_minus/0/to"));
        assert!(matches!(from_json_str("{\"name\":"), Err(KnotError::Parse(_))));
    }

    #[test]
    fn file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trefoil.json");
        let k = by_name("trefoil-neg").unwrap();
        save(&k, &path).unwrap();
        assert_eq!(load(&path).unwrap(), k);
        assert!(matches!(load(dir.path().join("missing.json")), Err(KnotError::Io { .. })));
    }
}
