//! Finitely generated Fuchsian groups and the plain-text generator format.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::SU11Element;

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub element: SU11Element,
    pub label: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianGroup {
    generators: Vec<Generator>,
    declared_genus: Option<u32>,
}

impl FuchsianGroup {
    pub fn new(generators: Vec<Generator>, declared_genus: Option<u32>) -> Self {
        FuchsianGroup {
            generators,
            declared_genus,
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn declared_genus(&self) -> Option<u32> {
        self.declared_genus
    }

    /// Word alphabet: symbol `2k` is generator `k`, symbol `2k+1` its inverse.
    pub fn symbols(&self) -> Vec<SU11Element> {
        self.generators
            .iter()
            .flat_map(|g| [g.element, g.element.inverse()])
            .collect()
    }

    /// Parses the six-column text format; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut generators = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 6 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 6 fields, found {}", fields.len()),
                });
            }
            let mut v = [0.0; 6];
            for (slot, f) in v.iter_mut().zip(&fields) {
                *slot = f.parse::<f64>().map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("'{f}': {e}"),
                })?;
                if !slot.is_finite() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("'{f}' is not finite"),
                    });
                }
            }
            if v[4].fract() != 0.0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("label id {} is not an integer", v[4]),
                });
            }
            let element = SU11Element::new(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]))
                .map_err(|e| Error::Parse {
                    line: line_no,
                    message: e.to_string(),
                })?;
            generators.push(Generator {
                element,
                label: v[4] as i64,
            });
        }
        Ok(FuchsianGroup::new(generators, None))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# Re(a) Im(a) Re(b) Im(b) label_id reserved\n");
        for g in &self.generators {
            let (a, b) = (g.element.a(), g.element.b());
            let _ = writeln!(
                out,
                "{:e} {:e} {:e} {:e} {} 0",
                a.re, a.im, b.re, b.im, g.label
            );
        }
        out
    }
}

/// The genus-two surface group whose Dirichlet domain about 0 is the regular
/// octagon with interior angles π/4.
pub fn octagon_group() -> FuchsianGroup {
    let a = 1.0 + std::f64::consts::SQRT_2;
    let m = (2.0 + 2.0 * std::f64::consts::SQRT_2).sqrt();
    let generators = (0..4)
        .map(|k| Generator {
            element: SU11Element::new(
                Complex64::new(a, 0.0),
                Complex64::from_polar(m, k as f64 * std::f64::consts::FRAC_PI_4),
            )
            .expect("octagon generator is in SU(1,1)"),
            label: k,
        })
        .collect();
    FuchsianGroup::new(generators, Some(2))
}

pub fn trivial_group() -> FuchsianGroup {
    FuchsianGroup::new(Vec::new(), None)
}

/// The (non-cocompact) cyclic group generated by one element.
pub fn cyclic_group(g: SU11Element) -> FuchsianGroup {
    FuchsianGroup::new(
        vec![Generator {
            element: g,
            label: 0,
        }],
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octagon_generators() {
        let g = octagon_group();
        assert_eq!(g.generators().len(), 4);
        // (1+√2)² - (2+2√2) = 1 in exact arithmetic
        let a = 1.0 + 2f64.sqrt();
        assert!((a * a - (2.0 + 2.0 * 2f64.sqrt()) - 1.0).abs() < 1e-14);
        let r0 = g.generators()[0].element.orbit_point().norm();
        for gen in g.generators() {
            assert!((gen.element.determinant() - 1.0).abs() < 1e-14);
            assert!((gen.element.orbit_point().norm() - r0).abs() < 1e-15);
            assert!(gen.element.trace() > 2.0);
        }
    }

    #[test]
    fn text_round_trip() {
        let g = octagon_group();
        let back = FuchsianGroup::parse(&g.to_text()).unwrap();
        for (x, y) in g.generators().iter().zip(back.generators()) {
            assert!(x.element.max_entry_diff(&y.element) < 1e-15);
            assert_eq!(x.label, y.label);
        }
    }

    #[test]
    fn parse_errors_name_the_line() {
        let text = "# header\n2.414 0 2.197 0 0 0\n\n1 2 3\n";
        assert_eq!(
            FuchsianGroup::parse(text).unwrap_err(),
            Error::Parse {
                line: 4,
                message: "expected 6 fields, found 3".into()
            }
        );
        let bad = "1 0 0 0 0 0\n0.5 0 2 0 1 0 # |a| < |b|\n";
        assert!(matches!(
            FuchsianGroup::parse(bad),
            Err(Error::Parse { line: 2, .. })
        ));
        let nan = "1 0 x 0 0 0";
        assert!(matches!(
            FuchsianGroup::parse(nan),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
