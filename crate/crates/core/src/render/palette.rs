use super::image::Rgb;
use crate::error::{Error, Result};

/// Bumped whenever [`DEFAULT_PALETTE`] changes, since rendered pixels and
/// legend text both depend on it.
pub const PALETTE_VERSION: u32 = 1;

/// Smallest CIE76 distance between any two entries of the default table.
pub const MIN_DELTA_E: f64 = 15.0;

/// 32 named colors, ordered so that the first few are the most common color
/// words. Names are lowercase and never contain `;`.
pub const DEFAULT_PALETTE: [(&str, [u8; 3]); 32] = [
    ("red", [230, 25, 75]),
    ("blue", [0, 90, 255]),
    ("green", [60, 180, 75]),
    ("orange", [245, 130, 48]),
    ("purple", [145, 30, 180]),
    ("cyan", [70, 240, 240]),
    ("yellow", [255, 225, 25]),
    ("magenta", [240, 50, 230]),
    ("lime", [170, 255, 60]),
    ("pink", [255, 160, 200]),
    ("teal", [0, 128, 128]),
    ("brown", [150, 80, 20]),
    ("navy", [0, 0, 128]),
    ("maroon", [128, 0, 0]),
    ("olive", [128, 128, 0]),
    ("lavender", [200, 160, 255]),
    ("beige", [255, 240, 190]),
    ("mint", [170, 255, 195]),
    ("coral", [255, 110, 90]),
    ("gold", [200, 160, 0]),
    ("indigo", [75, 0, 200]),
    ("crimson", [170, 0, 50]),
    ("turquoise", [0, 200, 170]),
    ("violet", [200, 110, 255]),
    ("khaki", [190, 190, 120]),
    ("salmon", [255, 170, 140]),
    ("plum", [120, 40, 100]),
    ("aqua", [0, 160, 230]),
    ("forest", [0, 90, 30]),
    ("tan", [200, 140, 90]),
    ("white", [255, 255, 255]),
    ("black", [0, 0, 0]),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaletteColor {
    pub name: String,
    pub rgb: Rgb,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    entries: Vec<PaletteColor>,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            entries: DEFAULT_PALETTE
                .iter()
                .map(|&(name, rgb)| PaletteColor {
                    name: name.to_owned(),
                    rgb: Rgb(rgb),
                })
                .collect(),
        }
    }
}

impl Palette {
    /// A custom palette; names and colors must be unique and names must be
    /// non-empty and free of `;` so that legends stay parseable.
    pub fn new(entries: Vec<PaletteColor>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::validation(None, "palette", "empty palette"));
        }
        for (i, e) in entries.iter().enumerate() {
            if e.name.is_empty() || e.name.contains(';') || e.name.trim() != e.name {
                return Err(Error::validation(
                    None,
                    "palette",
                    format!("invalid color name {:?}", e.name),
                ));
            }
            if entries[..i]
                .iter()
                .any(|p| p.name == e.name || p.rgb == e.rgb)
            {
                return Err(Error::validation(
                    None,
                    "palette",
                    format!("duplicate entry {:?}", e.name),
                ));
            }
        }
        Ok(Palette { entries })
    }

    pub fn from_names(names: &[&str]) -> Result<Self> {
        let entries = names
            .iter()
            .map(|&n| {
                DEFAULT_PALETTE
                    .iter()
                    .find(|(name, _)| *name == n)
                    .map(|&(name, rgb)| PaletteColor {
                        name: name.to_owned(),
                        rgb: Rgb(rgb),
                    })
                    .ok_or_else(|| {
                        Error::validation(None, "palette", format!("unknown color {n:?}"))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Palette::new(entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[PaletteColor] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> &PaletteColor {
        &self.entries[index]
    }

    pub fn contains_rgb(&self, rgb: Rgb) -> bool {
        self.entries.iter().any(|e| e.rgb == rgb)
    }

    /// Minimum pairwise CIE76 distance.
    pub fn min_delta_e(&self) -> f64 {
        let labs: Vec<[f64; 3]> = self.entries.iter().map(|e| srgb_to_lab(e.rgb)).collect();
        let mut min = f64::INFINITY;
        for (i, a) in labs.iter().enumerate() {
            for b in &labs[i + 1..] {
                let d = a
                    .iter()
                    .zip(b)
                    .map(|(p, q)| (p - q).powi(2))
                    .sum::<f64>()
                    .sqrt();
                min = min.min(d);
            }
        }
        min
    }
}

/// sRGB (D65) to CIELAB.
pub fn srgb_to_lab(c: Rgb) -> [f64; 3] {
    let lin = |u: u8| {
        let u = f64::from(u) / 255.0;
        if u <= 0.04045 {
            u / 12.92
        } else {
            ((u + 0.055) / 1.055).powf(2.4)
        }
    };
    let [r, g, b] = c.0.map(lin);
    let x = (0.4124 * r + 0.3576 * g + 0.1805 * b) / 0.95047;
    let y = 0.2126 * r + 0.7152 * g + 0.0722 * b;
    let z = (0.0193 * r + 0.1192 * g + 0.9505 * b) / 1.08883;
    let f = |t: f64| {
        if t > 0.008856 {
            t.cbrt()
        } else {
            7.787 * t + 16.0 / 116.0
        }
    };
    let (fx, fy, fz) = (f(x), f(y), f(z));
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_is_valid() {
        let p = Palette::default();
        assert_eq!(p.len(), 32);
        assert!(Palette::new(p.entries().to_vec()).is_ok());
        assert!(p.min_delta_e() >= MIN_DELTA_E, "{}", p.min_delta_e());
        assert_eq!(
            p.entries()[..6]
                .iter()
                .map(|e| e.name.as_str())
                .collect::<Vec<_>>(),
            ["red", "blue", "green", "orange", "purple", "cyan"]
        );
    }

    #[test]
    fn rejects_bad_entries() {
        let e = |name: &str, rgb| PaletteColor {
            name: name.into(),
            rgb: Rgb(rgb),
        };
        assert!(Palette::new(vec![]).is_err());
        assert!(Palette::new(vec![e("a;b", [0, 0, 0])]).is_err());
        assert!(Palette::new(vec![e("a", [0, 0, 0]), e("b", [0, 0, 0])]).is_err());
        assert!(Palette::new(vec![e("a", [0, 0, 0]), e("a", [1, 0, 0])]).is_err());
        assert!(Palette::from_names(&["blue", "green", "red"]).is_ok());
        assert!(Palette::from_names(&["chartreuse"]).is_err());
    }

    #[test]
    fn lab_reference_points() {
        let white = srgb_to_lab(Rgb([255, 255, 255]));
        assert!((white[0] - 100.0).abs() < 0.05 && white[1].abs() < 0.05 && white[2].abs() < 0.05);
        assert_eq!(srgb_to_lab(Rgb([0, 0, 0]))[0], 0.0);
    }
}
