//! Distance-banded channel allocation for access-point deployments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::csp::{Clause, CspInstance};
use crate::{Error, Result};

/// Channels in the 2.4 GHz band.
pub const DEFAULT_CHANNELS: u32 = 11;

/// Access points in the street-scale reference deployment.
pub const REFERENCE_APS: usize = 81;

/// Side of the reference square. With [`REFERENCE_SPACING_M`] it gives a
/// mean of about 2.2 neighbours within 15 m and 10 within 30 m.
pub const REFERENCE_SIDE_M: f64 = 130.0;

/// Minimum distance between two reference APs.
pub const REFERENCE_SPACING_M: f64 = 10.0;

// dart-throwing attempts per point before giving up
const PLACEMENT_ATTEMPTS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Point { x, y, z }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2))
            .sqrt()
    }
}

/// Access-point positions in metres.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    points: Vec<Point>,
}

impl Deployment {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::usage("deployment has no access points"));
        }
        if points
            .iter()
            .any(|p| !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()))
        {
            return Err(Error::usage("deployment coordinates must be finite"));
        }
        Ok(Deployment { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Indices of the other points strictly closer than `radius` to `i`.
    pub fn neighbors(&self, i: usize, radius: f64) -> Vec<usize> {
        let p = &self.points[i];
        (0..self.points.len())
            .filter(|&j| j != i && p.distance(&self.points[j]) < radius)
            .collect()
    }

    pub fn to_xyz(&self) -> String {
        self.points
            .iter()
            .map(|p| format!("{} {} {}\n", p.x, p.y, p.z))
            .collect()
    }
}

/// No other AP strictly within `radius_m` may sit closer than
/// `min_separation` channels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandRule {
    pub radius_m: f64,
    pub min_separation: u32,
}

impl BandRule {
    pub fn new(radius_m: f64, min_separation: u32) -> Result<Self> {
        if !(radius_m > 0.0 && radius_m.is_finite()) {
            return Err(Error::usage("band radius must be positive"));
        }
        if min_separation == 0 {
            return Err(Error::usage("band separation must be at least 1"));
        }
        Ok(BandRule {
            radius_m,
            min_separation,
        })
    }

    /// Parse `radius:separation` pairs separated by commas, e.g. `5:3,10:2`.
    pub fn parse_list(text: &str) -> Result<Vec<BandRule>> {
        text.split(',')
            .map(|item| {
                let (r, s) = item.trim().split_once(':').ok_or_else(|| {
                    Error::usage(format!("band rule {item:?} is not radius:separation"))
                })?;
                let r: f64 = r
                    .parse()
                    .map_err(|_| Error::usage(format!("bad radius {r:?}")))?;
                let s: u32 = s
                    .parse()
                    .map_err(|_| Error::usage(format!("bad separation {s:?}")))?;
                BandRule::new(r, s)
            })
            .collect()
    }
}

/// 5 m / 3 channels, 10 m / 2 channels, 30 m / 1 channel.
pub fn default_band_rules() -> Vec<BandRule> {
    vec![
        BandRule {
            radius_m: 5.0,
            min_separation: 3,
        },
        BandRule {
            radius_m: 10.0,
            min_separation: 2,
        },
        BandRule {
            radius_m: 30.0,
            min_separation: 1,
        },
    ]
}

/// Clause layout of a channel-allocation instance. Both layouts have the
/// same solutions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumEncoding {
    /// One clause per (rule, AP) whose scope is the AP and every AP inside
    /// the rule radius. An AP participates in the clauses of every AP whose
    /// radius covers it, so one conflict flags all neighbours of both ends.
    PerAp,
    /// One clause per (rule, pair of APs inside the rule radius). An AP's
    /// signal is then exactly "some AP within a radius is too close in
    /// channel to me", the interference it can sense itself.
    #[default]
    Pairwise,
}

fn check_rules(dep: &Deployment, rules: &[BandRule], channels: u32) -> Result<()> {
    if dep.is_empty() {
        return Err(Error::usage("deployment has no access points"));
    }
    if rules.windows(2).any(|w| w[0].radius_m > w[1].radius_m) {
        return Err(Error::usage("band rules must be sorted by radius"));
    }
    if let Some(max_sep) = rules.iter().map(|r| r.min_separation).max() {
        if channels < max_sep {
            return Err(Error::usage("fewer channels than the largest separation"));
        }
    }
    Ok(())
}

/// One band clause per (rule, AP), rule-major: clause `r * N + i` belongs to
/// AP `i` under rule `r`. Its scope is AP `i` followed by every AP inside the
/// rule radius, so each AP participates in its own clauses and in those of
/// every AP whose radius covers it.
pub fn spectrum_instance(
    dep: &Deployment,
    rules: &[BandRule],
    channels: u32,
) -> Result<CspInstance> {
    check_rules(dep, rules, channels)?;
    let n = dep.len();
    let mut clauses = Vec::with_capacity(rules.len() * n);
    for rule in rules {
        for i in 0..n {
            clauses.push(Clause::channel_band(
                i,
                &dep.neighbors(i, rule.radius_m),
                rule.min_separation,
            )?);
        }
    }
    CspInstance::uniform(n, channels, clauses)
}

/// One band clause per rule and unordered pair `i < j` strictly inside the
/// rule radius, rule-major then by `(i, j)`.
pub fn spectrum_instance_pairwise(
    dep: &Deployment,
    rules: &[BandRule],
    channels: u32,
) -> Result<CspInstance> {
    check_rules(dep, rules, channels)?;
    let n = dep.len();
    let mut clauses = Vec::new();
    for rule in rules {
        for i in 0..n {
            for j in dep.neighbors(i, rule.radius_m) {
                if j > i {
                    clauses.push(Clause::channel_band(i, &[j], rule.min_separation)?);
                }
            }
        }
    }
    CspInstance::uniform(n, channels, clauses)
}

pub fn spectrum_instance_encoded(
    dep: &Deployment,
    rules: &[BandRule],
    channels: u32,
    encoding: SpectrumEncoding,
) -> Result<CspInstance> {
    match encoding {
        SpectrumEncoding::PerAp => spectrum_instance(dep, rules, channels),
        SpectrumEncoding::Pairwise => spectrum_instance_pairwise(dep, rules, channels),
    }
}

/// Whitespace-separated `x y z` rows in metres; blank lines and `#` comments
/// are skipped.
pub fn parse_xyz(text: &str) -> Result<Deployment> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let coords = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::parse(idx + 1, "non-numeric coordinate"))?;
        if coords.len() != 3 {
            return Err(Error::parse(idx + 1, "expected three coordinates"));
        }
        points.push(Point::new(coords[0], coords[1], coords[2]));
    }
    Deployment::new(points)
}

/// `n` points uniform over a `side x side` square at ground level.
pub fn synthetic_deployment(n: usize, side: f64, seed: u64) -> Result<Deployment> {
    if n == 0 {
        return Err(Error::usage("need at least one access point"));
    }
    if !(side > 0.0 && side.is_finite()) {
        return Err(Error::usage("area side must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| Point::new(rng.gen_range(0.0..side), rng.gen_range(0.0..side), 0.0))
        .collect();
    Deployment::new(points)
}

/// `n` points over a `side x side` square at ground level, inserted one at
/// a time uniformly at random and rejected when closer than `min_spacing`
/// to a point already placed. `min_spacing = 0` is plain uniform placement
/// and draws the same points as [`synthetic_deployment`].
pub fn spaced_deployment(n: usize, side: f64, min_spacing: f64, seed: u64) -> Result<Deployment> {
    if n == 0 {
        return Err(Error::usage("need at least one access point"));
    }
    if !(side > 0.0 && side.is_finite()) {
        return Err(Error::usage("area side must be positive"));
    }
    if !(min_spacing >= 0.0 && min_spacing.is_finite()) {
        return Err(Error::usage("minimum spacing must be nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Point> = Vec::with_capacity(n);
    while points.len() < n {
        let mut placed = false;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let p = Point::new(rng.gen_range(0.0..side), rng.gen_range(0.0..side), 0.0);
            if points.iter().all(|q| q.distance(&p) >= min_spacing) {
                points.push(p);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::usage(format!(
                "could not place {n} points {min_spacing} m apart in a {side} m square"
            )));
        }
    }
    Deployment::new(points)
}

/// 81 APs over a 130 m square with at least 10 m between any two.
pub fn reference_deployment(seed: u64) -> Result<Deployment> {
    spaced_deployment(REFERENCE_APS, REFERENCE_SIDE_M, REFERENCE_SPACING_M, seed)
}

/// Average over APs of the number of other APs strictly within `radius`.
pub fn mean_neighbors(dep: &Deployment, radius: f64) -> f64 {
    let total: usize = (0..dep.len()).map(|i| dep.neighbors(i, radius).len()).sum();
    total as f64 / dep.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::Assignment;

    fn pair(d: f64) -> Deployment {
        Deployment::new(vec![Point::new(0.0, 0.0, 0.0), Point::new(d, 0.0, 0.0)]).unwrap()
    }

    #[test]
    fn close_pair_examples() {
        let inst = spectrum_instance(&pair(4.0), &default_band_rules(), DEFAULT_CHANNELS).unwrap();
        assert_eq!(inst.num_clauses(), 6);
        assert!(inst.is_solution(&Assignment(vec![1, 6])).unwrap());
        let bad = Assignment(vec![1, 3]);
        assert!(!inst.evaluate_clause(0, &bad).unwrap());
        assert!(inst.evaluate_clause(2, &bad).unwrap());
        assert!(inst.evaluate_clause(4, &bad).unwrap());
    }

    #[test]
    fn pairwise_layout() {
        let dep = Deployment::new(vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(4.0, 0.0, 0.0),
            Point::new(20.0, 0.0, 0.0),
        ])
        .unwrap();
        let inst =
            spectrum_instance_pairwise(&dep, &default_band_rules(), DEFAULT_CHANNELS).unwrap();
        // 5 m: (0,1); 10 m: (0,1); 30 m: (0,1), (0,2), (1,2)
        assert_eq!(inst.num_clauses(), 5);
        assert_eq!(inst.clause(3).scope(), &[0, 2]);
        assert_eq!(inst.participation(2), &[3, 4]);
    }

    #[test]
    fn far_pair_always_satisfied() {
        let inst =
            spectrum_instance(&pair(200.0), &default_band_rules(), DEFAULT_CHANNELS).unwrap();
        for a in 1..=11 {
            for b in 1..=11 {
                assert!(inst.is_solution(&Assignment(vec![a, b])).unwrap());
            }
        }
    }

    #[test]
    fn radius_is_strict() {
        let inst = spectrum_instance(&pair(5.0), &default_band_rules(), DEFAULT_CHANNELS).unwrap();
        // exactly 5 m apart: only the 10 m and 30 m rules apply
        assert!(inst.is_solution(&Assignment(vec![1, 3])).unwrap());
        assert!(!inst.is_solution(&Assignment(vec![1, 2])).unwrap());
    }

    #[test]
    fn rule_checks() {
        let mut rules = default_band_rules();
        rules.reverse();
        assert!(spectrum_instance(&pair(1.0), &rules, 11).is_err());
        assert!(spectrum_instance(&pair(1.0), &default_band_rules(), 2).is_err());
        assert!(BandRule::new(0.0, 1).is_err());
        assert!(BandRule::new(1.0, 0).is_err());
        assert_eq!(
            BandRule::parse_list("5:3,10:2,30:1").unwrap(),
            default_band_rules()
        );
        assert!(BandRule::parse_list("5-3").is_err());
    }

    #[test]
    fn xyz_parsing() {
        let dep = parse_xyz("0 0 0\n3 4 0").unwrap();
        assert_eq!(dep.len(), 2);
        assert_eq!(dep.points()[0].distance(&dep.points()[1]), 5.0);
        assert!(matches!(parse_xyz("# nothing\n\n"), Err(Error::Usage(_))));
        assert!(matches!(
            parse_xyz("0 0 0\n1 a 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_xyz("0 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        let back = parse_xyz(&dep.to_xyz()).unwrap();
        assert_eq!(back, dep);
    }

    #[test]
    fn eighty_one_line_file() {
        let dep = synthetic_deployment(81, 150.0, 3).unwrap();
        let text = dep.to_xyz();
        assert_eq!(text.lines().count(), 81);
        assert_eq!(parse_xyz(&text).unwrap().len(), 81);
    }

    #[test]
    fn synthetic_basics() {
        let one = synthetic_deployment(1, 150.0, 0).unwrap();
        for r in [1.0, 15.0, 30.0, 1e6] {
            assert_eq!(mean_neighbors(&one, r), 0.0);
        }
        assert_eq!(
            synthetic_deployment(20, 50.0, 9).unwrap(),
            synthetic_deployment(20, 50.0, 9).unwrap()
        );
        assert!(synthetic_deployment(0, 50.0, 9).is_err());
    }

    #[test]
    fn spacing_is_enforced() {
        assert_eq!(
            spaced_deployment(30, 80.0, 0.0, 4).unwrap(),
            synthetic_deployment(30, 80.0, 4).unwrap()
        );
        let dep = reference_deployment(2).unwrap();
        assert_eq!(dep.len(), REFERENCE_APS);
        for i in 0..dep.len() {
            assert!(dep.neighbors(i, REFERENCE_SPACING_M).is_empty());
        }
        assert!(spaced_deployment(50, 10.0, 5.0, 1).is_err());
    }
}
