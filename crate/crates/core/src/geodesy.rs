//! Great-circle geometry, the piecewise fibre-length model and the
//! geographic rectangles used for synthetic node placement.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Mean Earth radius in kilometres.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Minimum distance between two placed synthetic nodes.
pub const PLACEMENT_RADIUS_KM: f64 = 80.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("latitude {0} is not a finite value in [-90, 90]")]
    Latitude(f64),
    #[error("longitude {0} is not a finite value in [-180, 180]")]
    Longitude(f64),
    #[error("region corners do not span a positive rectangle")]
    DegenerateRegion,
    #[error("haversine distance {0} km is negative or not finite")]
    NegativeDistance(f64),
}

/// A location in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    latitude_deg: f64,
    longitude_deg: f64,
}

impl GeoPoint {
    pub fn new(latitude_deg: f64, longitude_deg: f64) -> Result<Self, GeoError> {
        if !latitude_deg.is_finite() || !(-90.0..=90.0).contains(&latitude_deg) {
            return Err(GeoError::Latitude(latitude_deg));
        }
        if !longitude_deg.is_finite() || !(-180.0..=180.0).contains(&longitude_deg) {
            return Err(GeoError::Longitude(longitude_deg));
        }
        Ok(Self {
            latitude_deg,
            longitude_deg,
        })
    }

    pub fn latitude_deg(&self) -> f64 {
        self.latitude_deg
    }

    pub fn longitude_deg(&self) -> f64 {
        self.longitude_deg
    }
}

/// Distance scale of a placement rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionLabel {
    Large,
    Medium,
    Small,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 3] = [RegionLabel::Large, RegionLabel::Medium, RegionLabel::Small];

    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLabel::Large => "large",
            RegionLabel::Medium => "medium",
            RegionLabel::Small => "small",
        }
    }
}

impl std::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RegionLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "large" => Ok(RegionLabel::Large),
            "medium" => Ok(RegionLabel::Medium),
            "small" => Ok(RegionLabel::Small),
            other => Err(format!("unknown region `{other}` (expected large|medium|small)")),
        }
    }
}

/// Axis-aligned (longitude, latitude) rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    min_corner: GeoPoint,
    max_corner: GeoPoint,
    label: RegionLabel,
}

impl Region {
    pub fn new(min_corner: GeoPoint, max_corner: GeoPoint, label: RegionLabel) -> Result<Self, GeoError> {
        if min_corner.longitude_deg >= max_corner.longitude_deg
            || min_corner.latitude_deg >= max_corner.latitude_deg
        {
            return Err(GeoError::DegenerateRegion);
        }
        Ok(Self {
            min_corner,
            max_corner,
            label,
        })
    }

    /// The three North-American placement rectangles.
    pub fn preset(label: RegionLabel) -> Self {
        let (lat_max, lon_max) = match label {
            RegionLabel::Large => (48.1261, -67.39),
            RegionLabel::Medium => (48.12, -96.12),
            RegionLabel::Small => (39.90, -96.12),
        };
        Self {
            min_corner: GeoPoint {
                latitude_deg: 31.68,
                longitude_deg: -124.86,
            },
            max_corner: GeoPoint {
                latitude_deg: lat_max,
                longitude_deg: lon_max,
            },
            label,
        }
    }

    pub fn min_corner(&self) -> GeoPoint {
        self.min_corner
    }

    pub fn max_corner(&self) -> GeoPoint {
        self.max_corner
    }

    pub fn label(&self) -> RegionLabel {
        self.label
    }

    pub fn center(&self) -> GeoPoint {
        GeoPoint {
            latitude_deg: 0.5 * (self.min_corner.latitude_deg + self.max_corner.latitude_deg),
            longitude_deg: 0.5 * (self.min_corner.longitude_deg + self.max_corner.longitude_deg),
        }
    }

    pub fn contains(&self, p: &GeoPoint) -> bool {
        (self.min_corner.latitude_deg..=self.max_corner.latitude_deg).contains(&p.latitude_deg)
            && (self.min_corner.longitude_deg..=self.max_corner.longitude_deg).contains(&p.longitude_deg)
    }
}

/// Great-circle distance on a sphere of radius [`EARTH_RADIUS_KM`].
pub fn haversine_km(a: &GeoPoint, b: &GeoPoint) -> f64 {
    let phi1 = a.latitude_deg.to_radians();
    let phi2 = b.latitude_deg.to_radians();
    let dphi = phi2 - phi1;
    let dsigma = (b.longitude_deg - a.longitude_deg).to_radians();
    let kappa = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dsigma / 2.0).sin().powi(2);
    // rounding can push kappa a hair above 1 for antipodal points
    2.0 * EARTH_RADIUS_KM * kappa.clamp(0.0, 1.0).sqrt().asin()
}

/// Piecewise fibre-length model applied to a Haversine distance.
///
/// Distances below 1000 km get a 1.5x routing overhead, 1000..=1200 km is
/// pinned to 1500 km, and longer hauls get 1.25x.
pub fn fibre_length_km(d_hav: f64) -> Result<f64, GeoError> {
    if !d_hav.is_finite() || d_hav < 0.0 {
        return Err(GeoError::NegativeDistance(d_hav));
    }
    Ok(if d_hav < 1000.0 {
        1.5 * d_hav
    } else if d_hav <= 1200.0 {
        1500.0
    } else {
        1.25 * d_hav
    })
}

/// Uniform draw in raw (longitude, latitude) degrees.
pub fn sample_point<R: Rng + ?Sized>(region: &Region, rng: &mut R) -> GeoPoint {
    let lon = rng.gen_range(region.min_corner.longitude_deg..=region.max_corner.longitude_deg);
    let lat = rng.gen_range(region.min_corner.latitude_deg..=region.max_corner.latitude_deg);
    GeoPoint {
        latitude_deg: lat,
        longitude_deg: lon,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(lat: f64, lon: f64) -> GeoPoint {
        GeoPoint::new(lat, lon).unwrap()
    }

    #[test]
    fn haversine_reference_values() {
        assert_eq!(haversine_km(&pt(0.0, 0.0), &pt(0.0, 0.0)), 0.0);
        let quarter = haversine_km(&pt(0.0, 0.0), &pt(0.0, 90.0));
        assert!((quarter - std::f64::consts::PI * EARTH_RADIUS_KM / 2.0).abs() < 1e-9);
        assert!((quarter - 10007.543398010286).abs() < 1e-6);
        // Vienna -> Frankfurt, cross-checked with a cross-product/atan2 great-circle formula
        let d = haversine_km(&pt(48.2091, 16.3729), &pt(50.1122, 8.6842));
        assert!((d - 597.445957916543).abs() < 1e-6, "{d}");
    }

    #[test]
    fn fibre_length_cases() {
        assert_eq!(fibre_length_km(500.0).unwrap(), 750.0);
        assert_eq!(fibre_length_km(1100.0).unwrap(), 1500.0);
        assert_eq!(fibre_length_km(2000.0).unwrap(), 2500.0);
        assert_eq!(fibre_length_km(1000.0).unwrap(), 1500.0);
        assert_eq!(fibre_length_km(1200.0).unwrap(), 1500.0);
        assert_eq!(fibre_length_km(0.0).unwrap(), 0.0);
        assert!(fibre_length_km(-1.0).is_err());
        assert!(fibre_length_km(f64::NAN).is_err());
    }

    #[test]
    fn fibre_length_is_continuous_at_case_boundaries() {
        let eps = 1e-9;
        for b in [1000.0, 1200.0] {
            let lo = fibre_length_km(b - eps).unwrap();
            let hi = fibre_length_km(b + eps).unwrap();
            assert!((lo - 1500.0).abs() < 1e-6 && (hi - 1500.0).abs() < 1e-6);
        }
    }

    #[test]
    fn point_and_region_validation() {
        assert!(GeoPoint::new(91.0, 0.0).is_err());
        assert!(GeoPoint::new(0.0, -180.5).is_err());
        assert!(GeoPoint::new(f64::INFINITY, 0.0).is_err());
        let a = pt(10.0, 5.0);
        assert_eq!(Region::new(a, pt(20.0, 5.0), RegionLabel::Small), Err(GeoError::DegenerateRegion));
        assert_eq!(Region::new(a, pt(10.0, 6.0), RegionLabel::Small), Err(GeoError::DegenerateRegion));
        assert!(Region::new(a, pt(11.0, 6.0), RegionLabel::Small).is_ok());
    }

    #[test]
    fn large_region_draws_stay_inside() {
        let region = Region::preset(RegionLabel::Large);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let p = sample_point(&region, &mut rng);
            assert!((-124.86..=-67.39).contains(&p.longitude_deg()));
            assert!((31.68..=48.1261).contains(&p.latitude_deg()));
        }
    }

    #[test]
    fn sample_mean_approaches_center() {
        let region = Region::preset(RegionLabel::Large);
        let c = region.center();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let draws = 100_000;
        let (mut lat, mut lon) = (0.0, 0.0);
        for _ in 0..draws {
            let p = sample_point(&region, &mut rng);
            lat += p.latitude_deg();
            lon += p.longitude_deg();
        }
        lat /= draws as f64;
        lon /= draws as f64;
        assert!(((lat - c.latitude_deg()) / c.latitude_deg()).abs() < 0.01);
        assert!(((lon - c.longitude_deg()) / c.longitude_deg()).abs() < 0.01);
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let region = Region::preset(RegionLabel::Medium);
        let a: Vec<_> = {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            (0..20).map(|_| sample_point(&region, &mut rng)).collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b: Vec<_> = (0..20).map(|_| sample_point(&region, &mut rng)).collect();
        assert_eq!(a, b);
    }

    fn any_point() -> impl Strategy<Value = GeoPoint> {
        (-90.0f64..=90.0, -180.0f64..=180.0).prop_map(|(la, lo)| GeoPoint::new(la, lo).unwrap())
    }

    proptest! {
        #[test]
        fn haversine_symmetric(a in any_point(), b in any_point()) {
            let ab = haversine_km(&a, &b);
            prop_assert!(ab >= 0.0);
            prop_assert!((ab - haversine_km(&b, &a)).abs() < 1e-9);
        }

        #[test]
        fn haversine_triangle_inequality(a in any_point(), b in any_point(), c in any_point()) {
            prop_assert!(haversine_km(&a, &c) <= haversine_km(&a, &b) + haversine_km(&b, &c) + 1e-9);
        }

        #[test]
        fn fibre_length_monotone(x in 0.0f64..5000.0, dx in 0.0f64..500.0) {
            prop_assert!(fibre_length_km(x).unwrap() <= fibre_length_km(x + dx).unwrap());
        }
    }
}
