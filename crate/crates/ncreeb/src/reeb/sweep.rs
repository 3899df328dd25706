//! Exact Reeb graph of the first-coordinate projection on the closure of a
//! 2-dimensional circle-arrangement domain.
//!
//! Between consecutive circle extremes each slice is a disjoint union of
//! closed intervals delimited by the active holes; the sweep tracks one open
//! edge per interval and places one vertex per slice component containing a
//! singular point. Everything is decided by rational comparisons; no slice
//! endpoint is ever computed numerically.

use super::graph::{LeveledGraph, VertexId};
use super::ReebError;
use crate::domain::{CircleInfo, NCDomain};
use crate::poly::{Rational, SphereOrientation};
use std::collections::BTreeMap;

pub(crate) struct CircleArrangement {
    pub outer: CircleInfo,
    pub holes: Vec<CircleInfo>,
}

/// Check the domain is a 2-dimensional arrangement of one inside-positive
/// outer circle with hole circles strictly inside it, pairwise disjoint or
/// tangent.
pub(crate) fn circle_arrangement(domain: &NCDomain) -> Result<CircleArrangement, ReebError> {
    let unsupported = |reason: String| ReebError::UnsupportedDomain { reason };
    if domain.ambient_dim() != 2 {
        return Err(unsupported(format!(
            "expected ambient dimension 2, got {}",
            domain.ambient_dim()
        )));
    }
    let infos = domain
        .circles()
        .ok_or_else(|| unsupported("constraints are not all circles".to_string()))?;
    let mut outer: Option<CircleInfo> = None;
    let mut holes = Vec::new();
    for info in infos {
        if info.offset_coord != 1 {
            return Err(unsupported("circle not in the first two coordinates".to_string()));
        }
        match info.orientation {
            SphereOrientation::InsidePositive => {
                if outer.is_some() {
                    return Err(unsupported("more than one outer circle".to_string()));
                }
                outer = Some(info.clone());
            }
            SphereOrientation::OutsidePositive => holes.push(info.clone()),
        }
    }
    let outer = outer.ok_or_else(|| unsupported("no outer circle".to_string()))?;
    for (i, h) in holes.iter().enumerate() {
        let dx = &h.center_sweep - &outer.center_sweep;
        let dy = &h.center_offset - &outer.center_offset;
        let d2 = &dx * &dx + &dy * &dy;
        let slack = &outer.radius - &h.radius;
        if !num_traits::Signed::is_positive(&slack) || d2 >= &slack * &slack {
            return Err(unsupported(format!(
                "hole {} is not strictly inside the outer circle",
                i + 1
            )));
        }
    }
    for i in 0..holes.len() {
        for j in (i + 1)..holes.len() {
            let dx = &holes[i].center_sweep - &holes[j].center_sweep;
            let dy = &holes[i].center_offset - &holes[j].center_offset;
            let d2 = &dx * &dx + &dy * &dy;
            let rsum = &holes[i].radius + &holes[j].radius;
            if d2 < &rsum * &rsum {
                return Err(unsupported(format!(
                    "holes {} and {} overlap",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(CircleArrangement { outer, holes })
}

#[derive(Default)]
struct LevelEvents {
    starts: Vec<usize>,
    ends: Vec<usize>,
}

/// Exact sweep. Every produced vertex sits at a circle extreme and is
/// essential; edges are the interval tracks between consecutive such levels.
pub fn reeb_exact(domain: &NCDomain) -> Result<LeveledGraph, ReebError> {
    let arr = circle_arrangement(domain)?;
    let (outer_lo, outer_hi) = arr.outer.sweep_extremes();

    let mut events: BTreeMap<Rational, LevelEvents> = BTreeMap::new();
    for (i, h) in arr.holes.iter().enumerate() {
        let (lo, hi) = h.sweep_extremes();
        events.entry(lo).or_default().starts.push(i);
        events.entry(hi).or_default().ends.push(i);
    }

    let mut graph = LeveledGraph::new();
    // Active holes sorted by offset, and one open track per gap between them.
    let mut active: Vec<usize> = Vec::new();
    let mut tracks: Vec<VertexId> = Vec::new();

    let birth = graph.add_vertex(outer_lo.clone(), true);
    tracks.push(birth);

    for (level, ev) in &events {
        debug_assert!(*level > outer_lo && *level < outer_hi);
        let ending = &ev.ends;
        let strict: Vec<usize> = active
            .iter()
            .copied()
            .filter(|h| !ending.contains(h))
            .collect();
        // Map each before-gap to the gap it limits into at this level.
        let mut map_before = Vec::with_capacity(active.len() + 1);
        {
            let mut count = 0usize;
            map_before.push(0);
            for h in &active {
                if !ending.contains(h) {
                    count += 1;
                }
                map_before.push(count);
            }
        }
        let mut after: Vec<usize> = strict.clone();
        after.extend(ev.starts.iter().copied());
        after.sort_by(|&a, &b| {
            arr.holes[a]
                .center_offset
                .cmp(&arr.holes[b].center_offset)
        });
        let mut map_after = Vec::with_capacity(after.len() + 1);
        {
            let mut count = 0usize;
            map_after.push(0);
            for h in &after {
                if strict.contains(h) {
                    count += 1;
                }
                map_after.push(count);
            }
        }
        // Slice components at this level containing a singular point.
        let at_len = strict.len() + 1;
        let mut singular = vec![false; at_len];
        for h in ev.starts.iter().chain(ev.ends.iter()) {
            let offset = &arr.holes[*h].center_offset;
            let slot = strict
                .iter()
                .filter(|&&s| arr.holes[s].center_offset < *offset)
                .count();
            singular[slot] = true;
        }
        let mut new_tracks: Vec<Option<VertexId>> = vec![None; after.len() + 1];
        for slot in 0..at_len {
            let befores: Vec<usize> = (0..map_before.len())
                .filter(|&j| map_before[j] == slot)
                .collect();
            let afters: Vec<usize> = (0..map_after.len())
                .filter(|&j| map_after[j] == slot)
                .collect();
            if singular[slot] {
                let v = graph.add_vertex(level.clone(), true);
                for &j in &befores {
                    graph.add_edge(tracks[j], v);
                }
                for &j in &afters {
                    new_tracks[j] = Some(v);
                }
            } else {
                debug_assert_eq!(befores.len(), 1);
                debug_assert_eq!(afters.len(), 1);
                new_tracks[afters[0]] = Some(tracks[befores[0]]);
            }
        }
        active = after;
        tracks = new_tracks.into_iter().map(|t| t.unwrap()).collect();
    }

    debug_assert!(active.is_empty());
    let death = graph.add_vertex(outer_hi, true);
    for t in tracks {
        graph.add_edge(t, death);
    }
    graph.validate().map_err(ReebError::Graph)?;
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_band_domain, Band, BandSpec};
    use crate::poly::{rat, RationalPoint};

    fn band(holes: usize) -> NCDomain {
        build_band_domain(&BandSpec::new(
            vec![Band::new(rat(-1), rat(1), holes)],
            RationalPoint::from_integers(&[0, 0]),
            rat(10),
        ))
        .unwrap()
    }

    #[test]
    fn single_hole_gives_theta() {
        let g = reeb_exact(&band(1)).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.betti1().unwrap(), 1);
        assert_eq!(g.degree_sequence(), vec![1, 1, 3, 3]);
        let levels = g.distinct_levels();
        assert_eq!(levels, vec![rat(-10), rat(-1), rat(1), rat(10)]);
        assert_eq!(g.sheet_count(&rat(0)).unwrap(), 2);
    }

    #[test]
    fn two_holes_merge_into_one_vertex_per_level() {
        let g = reeb_exact(&band(2)).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.betti1().unwrap(), 2);
        assert_eq!(g.degree_sequence(), vec![1, 1, 4, 4]);
        let at_minus_one: Vec<_> = g
            .vertex_ids()
            .filter(|&v| *g.level(v) == rat(-1))
            .collect();
        assert_eq!(at_minus_one.len(), 1);
        assert_eq!(g.sheet_count(&rat(0)).unwrap(), 3);
    }

    #[test]
    fn three_holes_sheets_and_betti() {
        let g = reeb_exact(&band(3)).unwrap();
        assert_eq!(g.betti1().unwrap(), 3);
        assert_eq!(g.sheet_count(&rat(0)).unwrap(), 4);
    }

    #[test]
    fn disk_is_a_path() {
        let d = NCDomain::disk(&RationalPoint::from_integers(&[0, 0]), &rat(10)).unwrap();
        let g = reeb_exact(&d).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn touching_bands_pinch_vertex() {
        let d = build_band_domain(&BandSpec::new(
            vec![Band::new(rat(0), rat(2), 1), Band::new(rat(2), rat(4), 1)],
            RationalPoint::from_integers(&[2, 0]),
            rat(20),
        ))
        .unwrap();
        let g = reeb_exact(&d).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.betti1().unwrap(), 2);
        let pinch = g
            .vertex_ids()
            .find(|&v| *g.level(v) == rat(2))
            .expect("vertex at the shared band level");
        assert_eq!(g.degree(pinch), 4);
    }

    #[test]
    fn separated_bands() {
        let d = build_band_domain(&BandSpec::new(
            vec![Band::new(rat(0), rat(2), 1), Band::new(rat(3), rat(5), 2)],
            RationalPoint::new(vec![crate::poly::ratio(5, 2), rat(0)]),
            rat(12),
        ))
        .unwrap();
        let g = reeb_exact(&d).unwrap();
        // Levels: outer left, 0, 2, 3, 5, outer right.
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 8);
        assert_eq!(g.betti1().unwrap(), 3);
        assert_eq!(g.sheet_count(&rat(1)).unwrap(), 2);
        assert_eq!(g.sheet_count(&rat(4)).unwrap(), 3);
        assert_eq!(g.sheet_count(&crate::poly::ratio(5, 2)).unwrap(), 1);
    }

    #[test]
    fn rejects_unsupported_domain() {
        let d = crate::domain::NCDomain::new(
            2,
            vec![crate::poly::Polynomial::variable(2, 0)],
            crate::domain::Neighborhood::WholeSpace,
        )
        .unwrap();
        assert!(matches!(
            reeb_exact(&d),
            Err(ReebError::UnsupportedDomain { .. })
        ));
    }

    #[test]
    fn betti_equals_total_hole_count_on_band_specs() {
        for (bands, expect) in [
            (vec![Band::new(rat(-1), rat(1), 1)], 1usize),
            (vec![Band::new(rat(-1), rat(1), 3)], 3),
            (
                vec![Band::new(rat(-4), rat(-2), 2), Band::new(rat(0), rat(3), 1)],
                3,
            ),
        ] {
            let (center, radius) = BandSpec::suggest_outer(&bands);
            let d = build_band_domain(&BandSpec::new(bands, center, radius)).unwrap();
            let g = reeb_exact(&d).unwrap();
            assert_eq!(g.betti1().unwrap(), expect);
        }
    }
}
