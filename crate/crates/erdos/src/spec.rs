//! Family descriptors written as short strings:
//! `xrsn:3,1,5`, `zigzag:r=4,2,4;s=3,2,5` and
//! `alpha:p=2;a=1,1,1,1;blocks=circulant`.
//!
//! A zig-zag `s` with `k` entries gets a trailing `0` appended.

use erdos_core::families::{AlphaSpec, FamilySpec, ZigzagSpec};

use crate::{Error, Result};

fn list(text: &str, what: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("invalid {what} entry {t:?}"))))
        .collect()
}

/// Splits `key=value;key=value` into pairs, rejecting unknown or repeated keys.
fn fields<'a>(body: &'a str, allowed: &[&str]) -> Result<Vec<(&'a str, &'a str)>> {
    let mut out: Vec<(&str, &str)> = Vec::new();
    for part in body.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
        let k = k.trim();
        if !allowed.contains(&k) {
            return Err(Error::Parse(format!("unknown field {k:?}")));
        }
        if out.iter().any(|(seen, _)| *seen == k) {
            return Err(Error::Parse(format!("field {k:?} given twice")));
        }
        out.push((k, v.trim()));
    }
    Ok(out)
}

fn field<'a>(fields: &[(&str, &'a str)], key: &str) -> Result<&'a str> {
    fields.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

pub fn parse_family_spec(text: &str) -> Result<FamilySpec> {
    let (kind, body) = text.split_once(':').ok_or_else(|| Error::Parse(format!("family spec {text:?} has no ':'")))?;
    match kind.trim() {
        "xrsn" => {
            let v = list(body, "xrsn")?;
            let [r, s, n] = v[..] else {
                return Err(Error::Parse("xrsn takes exactly three numbers r,s,n".into()));
            };
            Ok(FamilySpec::Rsn { r, s, n })
        }
        "zigzag" => {
            let f = fields(body, &["r", "s"])?;
            let r = list(field(&f, "r")?, "r")?;
            let mut s = list(field(&f, "s")?, "s")?;
            if s.len() == r.len() {
                s.push(0);
            }
            Ok(FamilySpec::Zigzag(ZigzagSpec::new(r, s)?))
        }
        "alpha" => {
            let f = fields(body, &["p", "a", "blocks"])?;
            let p: usize = field(&f, "p")?.parse().map_err(|_| Error::Parse("invalid p".into()))?;
            let a = list(field(&f, "a")?, "a")?;
            let alpha: [usize; 4] =
                a.try_into().map_err(|_| Error::Parse("alpha needs exactly four entries".into()))?;
            match f.iter().find(|(k, _)| *k == "blocks").map(|(_, v)| *v) {
                None | Some("circulant") => Ok(FamilySpec::Alpha(AlphaSpec::circulant(p, alpha)?)),
                Some(other) => Err(Error::Parse(format!("unsupported block kind {other:?}"))),
            }
        }
        other => Err(Error::Parse(format!("unknown family {other:?}"))),
    }
}
