//! Line-record text format: `surface`, `tri`, `curve`, `diagram` and `mc`
//! records, one per line, LF-terminated.  Printing is canonical so that
//! parse∘print is the identity on bytes.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::drawing::{admissible, NormalCurve};
use crate::heegaard::{standard_diagram, HeegaardDiagram};
use crate::mapclass::MappingClass;
use crate::tri::Triangulation;
use crate::Error;

/// Parsed document: header genus, the named curve table in input order, and
/// an optional diagram builder line.
#[derive(Debug, Clone)]
pub struct Document {
    pub genus: u32,
    pub curves: Vec<(String, Vec<u32>)>,
    pub diagram: Option<(i64, i64, i64, i64)>,
    pub mcs: Vec<(String, Vec<(bool, String)>)>,
}

fn side_token(tri: &Triangulation, t: usize, i: usize) -> String {
    let s = tri.side(t, i);
    if s.dir > 0 {
        format!("+{}", s.edge)
    } else {
        format!("-{}", s.edge)
    }
}

pub fn print_surface(tri: &Triangulation) -> String {
    let mut out = format!("surface g={}\n", tri.genus);
    for (t, _) in tri.triangles.iter().enumerate() {
        out.push_str(&format!(
            "tri {t} {} {} {}\n",
            side_token(tri, t, 0),
            side_token(tri, t, 1),
            side_token(tri, t, 2)
        ));
    }
    out
}

pub fn print_curve(name: &str, c: &NormalCurve) -> String {
    let ws: Vec<String> = c.w.iter().map(|x| x.to_string()).collect();
    format!("curve {name} w={}\n", ws.join(","))
}

/// Diagram file: builder line plus all nine distinguished curves.
pub fn print_diagram(dg: &HeegaardDiagram) -> String {
    let (p, q, p2, q2) = dg.params;
    let mut out = format!("diagram p={p} q={q} p2={p2} q2={q2}\n");
    for (i, c) in dg.v_system.curves.iter().enumerate() {
        out.push_str(&print_curve(&format!("d{}", i + 1), c));
    }
    for (i, c) in dg.w_system.curves.iter().enumerate() {
        out.push_str(&print_curve(&format!("e{}", i + 1), c));
    }
    for (i, c) in dg.mu.iter().enumerate() {
        out.push_str(&print_curve(&format!("m{}", i + 1), c));
    }
    out
}

/// Serialize a mapping class against a name table, inventing `c<k>` names
/// (and emitting their curve records first) for twist curves not in it.
pub fn print_mc(
    name: &str,
    f: &MappingClass,
    table: &mut Vec<(String, NormalCurve)>,
) -> String {
    let mut extra = String::new();
    let mut letters: Vec<String> = Vec::new();
    // word[0] is applied last; print left to right in composition order
    for (c, pos) in &f.word {
        let nm = match table.iter().find(|(_, k)| k == c) {
            Some((n, _)) => n.clone(),
            None => {
                let n = format!("c{}", table.len());
                extra.push_str(&print_curve(&n, c));
                table.push((n.clone(), c.clone()));
                n
            }
        };
        letters.push(format!("{}{nm}", if *pos { "T+" } else { "T-" }));
    }
    format!("{extra}mc {name} = {}\n", letters.join(" "))
}

pub fn realize_mc(
    tri: &Rc<Triangulation>,
    table: &[(String, NormalCurve)],
    letters: &[(bool, String)],
) -> Result<MappingClass, Error> {
    let mut word = Vec::new();
    for (pos, nm) in letters {
        let c = table
            .iter()
            .find(|(n, _)| n == nm)
            .ok_or_else(|| Error::Parse(format!("mc references unknown curve {nm}")))?;
        word.push((c.1.clone(), *pos));
    }
    Ok(MappingClass { tri: tri.clone(), word })
}

fn parse_kv<'a>(tok: &'a str, key: &str) -> Result<&'a str, Error> {
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("expected {key}=<...>, got {tok}")))
}

fn parse_int<T: std::str::FromStr>(s: &str) -> Result<T, Error> {
    s.parse().map_err(|_| Error::Parse(format!("bad integer {s}")))
}

/// Parse a document and validate it against the stated genus: tri rows must
/// reproduce the canonical triangulation, curve vectors must be admissible.
pub fn parse_document(text: &str) -> Result<(Document, Rc<Triangulation>), Error> {
    let mut lines = text.lines().peekable();
    let mut genus: Option<u32> = None;
    let mut diagram = None;
    let mut curves: Vec<(String, Vec<u32>)> = Vec::new();
    let mut mcs = Vec::new();
    let mut tri_rows: Vec<(usize, [String; 3])> = Vec::new();
    for line in &mut lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "surface" => {
                if toks.len() != 2 {
                    return Err(Error::Parse("surface takes exactly g=<int>".into()));
                }
                genus = Some(parse_int(parse_kv(toks[1], "g")?)?);
            }
            "tri" => {
                if toks.len() != 5 {
                    return Err(Error::Parse(format!("bad tri row: {line}")));
                }
                let idx = parse_int(toks[1])?;
                tri_rows.push((idx, [toks[2].into(), toks[3].into(), toks[4].into()]));
            }
            "curve" => {
                if toks.len() != 3 {
                    return Err(Error::Parse(format!("bad curve row: {line}")));
                }
                let w = parse_kv(toks[2], "w")?
                    .split(',')
                    .map(parse_int)
                    .collect::<Result<Vec<u32>, _>>()?;
                curves.push((toks[1].to_string(), w));
            }
            "diagram" => {
                if toks.len() != 5 {
                    return Err(Error::Parse(format!("bad diagram row: {line}")));
                }
                diagram = Some((
                    parse_int(parse_kv(toks[1], "p")?)?,
                    parse_int(parse_kv(toks[2], "q")?)?,
                    parse_int(parse_kv(toks[3], "p2")?)?,
                    parse_int(parse_kv(toks[4], "q2")?)?,
                ));
                genus = genus.or(Some(3));
            }
            "mc" => {
                if toks.len() < 3 || toks[2] != "=" {
                    return Err(Error::Parse(format!("bad mc row: {line}")));
                }
                let mut letters = Vec::new();
                for t in &toks[3..] {
                    let (pos, nm) = if let Some(r) = t.strip_prefix("T+") {
                        (true, r)
                    } else if let Some(r) = t.strip_prefix("T-") {
                        (false, r)
                    } else {
                        return Err(Error::Parse(format!("bad mc letter {t}")));
                    };
                    letters.push((pos, nm.to_string()));
                }
                mcs.push((toks[1].to_string(), letters));
            }
            other => return Err(Error::Parse(format!("unknown record {other}"))),
        }
    }
    let genus = genus.ok_or_else(|| Error::Parse("missing surface header".into()))?;
    let tri = crate::tri::build_genus_surface(genus).map(Rc::new)?;
    // tri rows, when present, must match the canonical build exactly
    for (idx, sides) in &tri_rows {
        if *idx >= tri.num_triangles() {
            return Err(Error::Parse(format!("tri index {idx} out of range")));
        }
        for i in 0..3 {
            if sides[i] != side_token(&tri, *idx, i) {
                return Err(Error::Parse(format!(
                    "tri row {idx} disagrees with the genus-{genus} surface"
                )));
            }
        }
    }
    let mut seen = BTreeMap::new();
    for (name, w) in &curves {
        if seen.insert(name.clone(), ()).is_some() {
            return Err(Error::Parse(format!("duplicate curve name {name}")));
        }
        if !admissible(&tri, w) {
            return Err(Error::Parse(format!("curve {name} is not admissible")));
        }
    }
    Ok((Document { genus, curves, diagram, mcs }, tri))
}

/// Rebuild the diagram named by a document's builder line.
pub fn document_diagram(doc: &Document) -> Result<Option<HeegaardDiagram>, Error> {
    match doc.diagram {
        Some((p, q, p2, q2)) => Ok(Some(standard_diagram(p, q, p2, q2)?)),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heegaard::standard_diagram;
    use crate::path::slope_curve;

    #[test]
    fn surface_and_curve_roundtrip() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let mut text = print_surface(&dg.tri);
        text.push_str(&print_curve("d1", &dg.v_system.curves[0]));
        let (doc, tri) = parse_document(&text).unwrap();
        assert_eq!(doc.genus, 3);
        assert_eq!(doc.curves[0].1, dg.v_system.curves[0].w);
        let mut out = print_surface(&tri);
        out.push_str(&print_curve("d1", &NormalCurve { w: doc.curves[0].1.clone() }));
        assert_eq!(out, text);
    }

    #[test]
    fn diagram_roundtrip() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let text = print_diagram(&dg);
        let (doc, _) = parse_document(&text).unwrap();
        let dg2 = document_diagram(&doc).unwrap().unwrap();
        assert_eq!(print_diagram(&dg2), text);
        assert_eq!(doc.curves.len(), 9);
    }

    #[test]
    fn mc_roundtrip_and_realize() {
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let f = MappingClass::twist(&dg.tri, &dg.mu[0], true)
            .compose(&MappingClass::twist(&dg.tri, &dg.v_system.curves[1], false));
        let mut table = vec![("m1".to_string(), dg.mu[0].clone())];
        let rec = print_mc("f", &f, &mut table);
        assert!(rec.starts_with("curve c1 w="));
        assert!(rec.contains("mc f = T+m1 T-c1"));
        let mut text = format!("surface g=3\n{rec}");
        let (doc, tri) = parse_document(&text).unwrap();
        let tab: Vec<(String, NormalCurve)> = {
            let mut t = vec![("m1".to_string(), dg.mu[0].clone())];
            for (n, w) in &doc.curves {
                t.push((n.clone(), NormalCurve { w: w.clone() }));
            }
            t
        };
        let g = realize_mc(&tri, &tab, &doc.mcs[0].1).unwrap();
        assert_eq!(g.word, f.word);
        // and printing again is bit-exact
        let mut table2 = vec![("m1".to_string(), dg.mu[0].clone())];
        assert_eq!(print_mc("f", &g, &mut table2), rec);
        text.push_str("mc g = T+nope\n");
        let (doc2, tri2) = parse_document(&text).unwrap();
        assert!(realize_mc(&tri2, &tab, &doc2.mcs[1].1).is_err());
    }

    #[test]
    fn rejections() {
        assert!(parse_document("curve a w=1,2\n").is_err()); // no header
        assert!(parse_document("surface g=3\nblob x\n").is_err());
        assert!(parse_document("surface g=3\ncurve a w=1\n").is_err()); // wrong len
        let dg = standard_diagram(2, 1, 3, 1).unwrap();
        let mut text = print_surface(&dg.tri);
        let c = slope_curve(&dg.tri, 0, 1, 0).unwrap();
        text.push_str(&print_curve("s", &c));
        text.push_str(&print_curve("s", &c));
        assert!(parse_document(&text).is_err()); // duplicate name
        // tampered tri row
        let bad = text.replace("tri 0 ", "tri 0 +9 ");
        assert!(parse_document(&bad).is_err());
    }
}
