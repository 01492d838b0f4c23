use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ConvexPolygon, Point};
use crate::error::Result;

/// Polygon exchange format: `{"vertices": [[x, y], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonFile {
    pub vertices: Vec<[f64; 2]>,
}

/// Parses the exchange format; clockwise input is reversed with a warning.
pub fn parse_polygon_json(text: &str) -> Result<ConvexPolygon> {
    let file: PolygonFile = serde_json::from_str(text)?;
    let vs = file.vertices.into_iter().map(Point::from).collect();
    let (poly, reversed) = ConvexPolygon::new_any_orientation(vs)?;
    if reversed {
        log::warn!("polygon vertices were clockwise; reversed to counter-clockwise");
    }
    Ok(poly)
}

pub fn load_polygon_file(path: impl AsRef<Path>) -> Result<ConvexPolygon> {
    let text = std::fs::read_to_string(path)?;
    parse_polygon_json(&text)
}

pub fn polygon_to_json(p: &ConvexPolygon) -> String {
    let file = PolygonFile {
        vertices: p.vertices().iter().map(|&v| v.into()).collect(),
    };
    serde_json::to_string(&file).expect("finite coordinates serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn round_trip_and_reversal() {
        let sq = ConvexPolygon::unit_square();
        let text = polygon_to_json(&sq);
        assert_eq!(parse_polygon_json(&text).unwrap(), sq);
        let cw = r#"{"vertices": [[0,0],[0,1],[1,1],[1,0]]}"#;
        let p = parse_polygon_json(cw).unwrap();
        assert!((p.area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_polygon_json("{\"vertices\": 3}"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_polygon_json(r#"{"vertices": [[0,0],[1,0]]}"#),
            Err(Error::DegeneratePolygon(_))
        ));
    }
}
