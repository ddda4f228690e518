//! JSON domain specifications:
//!
//! ```text
//! {"type":"punctured","dim":2,"points":[[0,0]]}
//! {"type":"half_space","normal":[0,-1],"offset":0}
//! {"type":"convex_polygon","vertices":[[0,0],[1,0],[0,1]]}
//! {"type":"simple_polygon","vertices":[[0,0],[1,0],[0,1]]}
//! {"type":"ball_union","balls":[{"c":[0,0],"r":1.0}]}
//! ```
//!
//! Parsing is strict: unknown fields and tags are errors.

use serde::{Deserialize, Serialize};

use super::{Disk, Domain};
use crate::error::{Error, Result};
use crate::point::{Point, Vec2};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSpec {
    pub c: [f64; 2],
    pub r: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Punctured { dim: usize, points: Vec<Vec<f64>> },
    HalfSpace { normal: [f64; 2], offset: f64 },
    ConvexPolygon { vertices: Vec<[f64; 2]> },
    SimplePolygon { vertices: Vec<[f64; 2]> },
    BallUnion { balls: Vec<DiskSpec> },
}

fn vec2s(v: &[[f64; 2]]) -> Vec<Vec2> {
    v.iter().map(|&[x, y]| Vec2::new(x, y)).collect()
}

fn arrays(v: &[Vec2]) -> Vec<[f64; 2]> {
    v.iter().map(|p| [p.x, p.y]).collect()
}

impl DomainSpec {
    pub fn build(&self) -> Result<Domain> {
        match self {
            DomainSpec::Punctured { dim, points } => {
                let pts = points
                    .iter()
                    .map(|c| {
                        let p = Point::new(c.clone())?;
                        p.check_dim(*dim)?;
                        Ok(p)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Domain::punctured(pts)
            }
            DomainSpec::HalfSpace { normal, offset } => {
                Domain::half_plane(Vec2::new(normal[0], normal[1]), *offset)
            }
            DomainSpec::ConvexPolygon { vertices } => Domain::convex_polygon(vec2s(vertices)),
            DomainSpec::SimplePolygon { vertices } => Domain::simple_polygon(vec2s(vertices)),
            DomainSpec::BallUnion { balls } => Domain::ball_union(
                balls
                    .iter()
                    .map(|b| Disk {
                        center: Vec2::new(b.c[0], b.c[1]),
                        radius: b.r,
                    })
                    .collect(),
            ),
        }
    }
}

impl Domain {
    pub fn to_spec(&self) -> DomainSpec {
        match self {
            Domain::Punctured(s) => DomainSpec::Punctured {
                dim: s.dim(),
                points: s.punctures().iter().map(|p| p.coords().to_vec()).collect(),
            },
            Domain::HalfSpace(h) => DomainSpec::HalfSpace {
                normal: [h.normal().x, h.normal().y],
                offset: h.offset(),
            },
            Domain::ConvexPolygon(p) => DomainSpec::ConvexPolygon {
                vertices: arrays(p.vertices()),
            },
            Domain::SimplePolygon(p) => DomainSpec::SimplePolygon {
                vertices: arrays(p.vertices()),
            },
            Domain::BallUnion(u) => DomainSpec::BallUnion {
                balls: u
                    .disks()
                    .iter()
                    .map(|d| DiskSpec {
                        c: [d.center.x, d.center.y],
                        r: d.radius,
                    })
                    .collect(),
            },
        }
    }

    pub fn from_json(text: &str) -> Result<Domain> {
        let spec: DomainSpec =
            serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        spec.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("domain spec serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_variant() {
        let cases = [
            r#"{"type":"punctured","dim":2,"points":[[0,0]]}"#,
            r#"{"type":"punctured","dim":3,"points":[[0,0,0],[1,0,0]]}"#,
            r#"{"type":"half_space","normal":[0,-1],"offset":0}"#,
            r#"{"type":"convex_polygon","vertices":[[0,0],[1,0],[0,1]]}"#,
            r#"{"type":"simple_polygon","vertices":[[0,0],[2,0],[2,2],[1,1],[0,2]]}"#,
            r#"{"type":"ball_union","balls":[{"c":[0,0],"r":1.0},{"c":[1.5,0],"r":1}]}"#,
        ];
        for c in cases {
            let g = Domain::from_json(c).unwrap_or_else(|e| panic!("{c}: {e}"));
            assert_eq!(Domain::from_json(&g.to_json()).unwrap(), g);
        }
    }

    #[test]
    fn strict_parsing() {
        let bad = [
            r#"{"type":"punctured","dim":2,"points":[[0,0]],"extra":1}"#,
            r#"{"type":"ball_union","balls":[{"c":[0,0],"r":1.0,"w":2}]}"#,
            r#"{"type":"annulus","r":1}"#,
            r#"{"type":"punctured","dim":3,"points":[[0,0]]}"#,
            r#"{"type":"half_space","normal":[0,0],"offset":0}"#,
            r#"{"type":"ball_union","balls":[{"c":[0,0],"r":1},{"c":[2,0],"r":1}]}"#,
            "not json",
        ];
        for b in bad {
            assert!(Domain::from_json(b).is_err(), "{b} should be rejected");
        }
    }
}
