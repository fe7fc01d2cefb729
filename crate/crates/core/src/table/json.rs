//! Table file format.
//!
//! ```json
//! { "name": "...",
//!   "loops": [ [ {"type":"segment","a":[x,y],"b":[x,y]},
//!                {"type":"arc","center":[x,y],"radius":r,
//!                 "angle_start":a0,"angle_end":a1,"traversal":"ccw"} ] ] }
//! ```
//!
//! Reals are written with 17 significant digits.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use super::{BilliardTable, TableError};
use crate::geometry::{ArcGeom, Geom, SegmentGeom, Traversal, Vec2};

#[derive(Debug, Serialize, Deserialize)]
struct TableFile {
    name: String,
    loops: Vec<Vec<ComponentFile>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ComponentFile {
    Segment {
        a: [f64; 2],
        b: [f64; 2],
    },
    Arc {
        center: [f64; 2],
        radius: f64,
        angle_start: f64,
        angle_end: f64,
        traversal: Traversal,
    },
}

fn pt(p: [f64; 2]) -> Vec2 {
    Vec2::new(p[0], p[1])
}

/// Serializes any value with pretty layout and 17-significant-digit reals.
pub fn write_json_pretty<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter::default());
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits utf-8"))
}

pub fn table_to_json(table: &BilliardTable) -> String {
    let file = TableFile {
        name: table.name.clone(),
        loops: table
            .loop_components()
            .into_iter()
            .map(|l| {
                l.into_iter()
                    .map(|c| match c.geom {
                        Geom::Segment(s) => ComponentFile::Segment {
                            a: [s.a.x, s.a.y],
                            b: [s.b.x, s.b.y],
                        },
                        Geom::Arc(a) => ComponentFile::Arc {
                            center: [a.center.x, a.center.y],
                            radius: a.radius,
                            angle_start: a.angle_start,
                            angle_end: a.angle_end,
                            traversal: a.traversal,
                        },
                    })
                    .collect()
            })
            .collect(),
    };
    write_json_pretty(&file).expect("table geometry is finite")
}

/// Parses a table file. The result is structurally sound but not validated.
pub fn table_from_json(text: &str) -> Result<BilliardTable, TableError> {
    let file: TableFile =
        serde_json::from_str(text).map_err(|e| TableError::Json(e.to_string()))?;
    let loops = file
        .loops
        .into_iter()
        .map(|l| {
            l.into_iter()
                .map(|c| {
                    Ok(match c {
                        ComponentFile::Segment { a, b } => {
                            Geom::Segment(SegmentGeom::new(pt(a), pt(b))?)
                        }
                        ComponentFile::Arc {
                            center,
                            radius,
                            angle_start,
                            angle_end,
                            traversal,
                        } => Geom::Arc(ArcGeom::new(
                            pt(center),
                            radius,
                            angle_start,
                            angle_end,
                            traversal,
                        )?),
                    })
                })
                .collect::<Result<Vec<_>, TableError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    BilliardTable::from_loops(file.name, loops)
}

/// Pretty layout with reals printed as `d.dddddddddddddddde±x`.
#[derive(Default)]
struct Sig17Formatter<'a> {
    pretty: PrettyFormatter<'a>,
}

impl Formatter for Sig17Formatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if !value.is_finite() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                "non-finite real",
            ));
        }
        // Normalize negative zero so equal tables serialize identically.
        let value = if value == 0.0 { 0.0 } else { value };
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(w)
    }
}
