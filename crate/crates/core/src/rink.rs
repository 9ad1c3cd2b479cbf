//! Parametric rink model and the attacking-frame coordinate convention.
//!
//! All coordinates are in feet with the origin at center ice. In the
//! normalized frame `x_north` points toward the goal being attacked and
//! `y_east` runs across the width of the rink.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RinkSpec {
    pub length_ft: f64,
    pub width_ft: f64,
    pub corner_radius_ft: f64,
    /// Distance of each blue line from the center line.
    pub blue_line_offset_ft: f64,
    /// Distance of each goal line from its end board.
    pub goal_line_offset_ft: f64,
    pub cell_size_ft: f64,
}

impl RinkSpec {
    /// North American rink used by the NHL and AHL.
    pub const NHL: RinkSpec = RinkSpec {
        length_ft: 200.0,
        width_ft: 85.0,
        corner_radius_ft: 28.0,
        blue_line_offset_ft: 25.0,
        goal_line_offset_ft: 11.0,
        cell_size_ft: 5.0,
    };

    /// International surface: 13.5 ft wider, neutral zone 8 ft longer and the
    /// goal line 6 ft closer to the blue line than [`RinkSpec::NHL`].
    pub const SHL: RinkSpec = RinkSpec {
        length_ft: 200.0,
        width_ft: 98.5,
        corner_radius_ft: 28.0,
        blue_line_offset_ft: 29.0,
        goal_line_offset_ft: 13.0,
        cell_size_ft: 5.0,
    };

    pub fn preset(name: &str) -> Option<RinkSpec> {
        match name.to_ascii_lowercase().as_str() {
            "nhl" | "ahl" => Some(Self::NHL),
            "shl" => Some(Self::SHL),
            _ => None,
        }
    }

    /// Resolves a preset name, falling back to a `key=value` file path.
    pub fn resolve(name_or_path: &str) -> Result<RinkSpec> {
        match Self::preset(name_or_path) {
            Some(spec) => Ok(spec),
            None => Self::from_file(name_or_path),
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<RinkSpec> {
        let text = std::fs::read_to_string(path)?;
        text.parse()
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("length_ft", self.length_ft),
            ("width_ft", self.width_ft),
            ("blue_line_offset_ft", self.blue_line_offset_ft),
            ("goal_line_offset_ft", self.goal_line_offset_ft),
            ("cell_size_ft", self.cell_size_ft),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {value}")));
            }
        }
        if !(self.corner_radius_ft.is_finite() && self.corner_radius_ft >= 0.0) {
            return Err(Error::Config("corner_radius_ft must be non-negative".into()));
        }
        if 2.0 * self.blue_line_offset_ft >= self.length_ft {
            return Err(Error::Config("blue lines must lie inside the rink".into()));
        }
        if self.corner_radius_ft > self.length_ft.min(self.width_ft) / 2.0 {
            return Err(Error::Config("corner radius exceeds half the rink size".into()));
        }
        Ok(())
    }

    pub fn half_length(&self) -> f64 {
        self.length_ft / 2.0
    }

    pub fn half_width(&self) -> f64 {
        self.width_ft / 2.0
    }

    /// Center of the goal line being attacked, in the normalized frame.
    pub fn attacked_goal(&self) -> NormalizedPoint {
        NormalizedPoint::new(self.half_length() - self.goal_line_offset_ft, 0.0)
    }

    /// Point-in-rounded-rectangle test in center-origin coordinates.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let hl = self.half_length();
        let hw = self.half_width();
        let (ax, ay) = (x.abs(), y.abs());
        if !(ax <= hl && ay <= hw) {
            return false;
        }
        let r = self.corner_radius_ft;
        let (cx, cy) = (hl - r, hw - r);
        if ax > cx && ay > cy {
            let (dx, dy) = (ax - cx, ay - cy);
            return dx * dx + dy * dy <= r * r;
        }
        true
    }

    /// Exact area enclosed by the rounded boundary.
    pub fn area(&self) -> f64 {
        let r = self.corner_radius_ft;
        self.length_ft * self.width_ft - (4.0 - std::f64::consts::PI) * r * r
    }

    /// Maps raw center-origin coordinates into the attacking frame of a team
    /// whose attack direction is `attack_sign` (+1 or -1).
    pub fn normalize(&self, raw_x: f64, raw_y: f64, attack_sign: AttackSign) -> Result<NormalizedPoint> {
        if !self.contains(raw_x, raw_y) {
            return Err(Error::OutsideRink { x: raw_x, y: raw_y });
        }
        let s = attack_sign.factor();
        Ok(NormalizedPoint::new(s * raw_x, s * raw_y))
    }

    pub fn zone_of(&self, p: NormalizedPoint) -> Zone {
        Zone::from_x(p.x_north, self.blue_line_offset_ft)
    }
}

impl Default for RinkSpec {
    fn default() -> Self {
        Self::NHL
    }
}

impl FromStr for RinkSpec {
    type Err = Error;

    /// Parses a `key=value` configuration. Keys not present keep the NHL
    /// default; `#` starts a comment.
    fn from_str(text: &str) -> Result<Self> {
        let mut spec = RinkSpec::NHL;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("expected key=value, got `{line}`"),
            })?;
            let value: f64 = value.trim().parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("`{}` is not a number", value.trim()),
            })?;
            let slot = match key.trim() {
                "length_ft" => &mut spec.length_ft,
                "width_ft" => &mut spec.width_ft,
                "corner_radius_ft" => &mut spec.corner_radius_ft,
                "blue_line_offset_ft" => &mut spec.blue_line_offset_ft,
                "goal_line_offset_ft" => &mut spec.goal_line_offset_ft,
                "cell_size_ft" => &mut spec.cell_size_ft,
                other => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!("unknown rink key `{other}`"),
                    })
                }
            };
            *slot = value;
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Attack direction of a team in one period of one game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttackSign {
    Positive,
    Negative,
}

impl AttackSign {
    pub fn factor(self) -> f64 {
        match self {
            AttackSign::Positive => 1.0,
            AttackSign::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            AttackSign::Positive => AttackSign::Negative,
            AttackSign::Negative => AttackSign::Positive,
        }
    }

    pub fn from_factor(v: i64) -> Option<Self> {
        match v {
            1 => Some(AttackSign::Positive),
            -1 => Some(AttackSign::Negative),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NormalizedPoint {
    pub x_north: f64,
    pub y_east: f64,
}

impl NormalizedPoint {
    pub const fn new(x_north: f64, y_east: f64) -> Self {
        Self { x_north, y_east }
    }

    /// Reflection through center ice: the same location seen from the
    /// opposing team's attacking frame.
    pub fn mirrored(self) -> Self {
        Self::new(-self.x_north, -self.y_east)
    }

    pub fn distance_to(self, other: NormalizedPoint) -> f64 {
        let dx = other.x_north - self.x_north;
        let dy = other.y_east - self.y_east;
        (dx * dx + dy * dy).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Zone {
    DZ,
    NZ,
    OZ,
}

impl Zone {
    pub const ALL: [Zone; 3] = [Zone::DZ, Zone::NZ, Zone::OZ];

    /// Blue-line points belong to the neutral zone.
    pub fn from_x(x_north: f64, blue_line_offset_ft: f64) -> Zone {
        if x_north < -blue_line_offset_ft {
            Zone::DZ
        } else if x_north > blue_line_offset_ft {
            Zone::OZ
        } else {
            Zone::NZ
        }
    }

    pub fn mirrored(self) -> Zone {
        match self {
            Zone::DZ => Zone::OZ,
            Zone::NZ => Zone::NZ,
            Zone::OZ => Zone::DZ,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Zone::DZ => "DZ",
            Zone::NZ => "NZ",
            Zone::OZ => "OZ",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Zone {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "DZ" => Ok(Zone::DZ),
            "NZ" => Ok(Zone::NZ),
            "OZ" => Ok(Zone::OZ),
            _ => Err(Error::Config(format!("unknown zone `{s}`"))),
        }
    }
}
