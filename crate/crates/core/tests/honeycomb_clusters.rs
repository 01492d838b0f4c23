use robin_honeycomb::cheeger::hex_constants;
use robin_honeycomb::geometry::ConvexPolygon;
use robin_honeycomb::honeycomb::{
    asymptotic_table, build_cluster, build_cluster_with, partition_sum_eig,
    partition_sum_perimeter, sup_functionals, CellShape, HoneycombConfig, PartitionFunctional,
    ReferenceCell,
};
use robin_honeycomb::Error;

#[test]
fn clusters_are_disjoint_and_contained() {
    let square = ConvexPolygon::unit_square();
    for k in [16, 100, 400] {
        let c = build_cluster_with(&square, k, 0.05, CellShape::Cheeger, true).unwrap();
        assert_eq!(c.centers.len(), k);
        c.verify().unwrap();
        assert!(c.effective_epsilon >= 0.05 - 1e-12);
    }
    let hexes = build_cluster_with(
        &ConvexPolygon::regular(6, 3.0).unwrap(),
        50,
        0.2,
        CellShape::Hexagon,
        true,
    )
    .unwrap();
    hexes.verify().unwrap();
}

#[test]
fn strict_build_reports_infeasibility() {
    let square = ConvexPolygon::unit_square();
    assert!(matches!(
        build_cluster(&square, 64, 0.0),
        Err(Error::ClusterInfeasible { .. })
    ));
    assert!(build_cluster(&square, 64, 0.3).is_ok());
    assert!(build_cluster(&square, 0, 0.3).is_err());
    assert!(build_cluster(&square, 4, 1.0).is_err());
}

#[test]
fn perimeter_sum_is_exact() {
    let square = ConvexPolygon::unit_square();
    let h = hex_constants().h;
    for k in [16, 64, 256] {
        let c = build_cluster_with(&square, k, 0.05, CellShape::Cheeger, true).unwrap();
        let r = partition_sum_perimeter(&c, 1).unwrap();
        let target = h / (1.0 - c.effective_epsilon).sqrt();
        assert!((r.scaled - target).abs() <= 1e-10 * target, "k = {k}");
    }
}

#[test]
fn eig_sum_sits_below_the_perimeter_sum() {
    let square = ConvexPolygon::unit_square();
    let reference = ReferenceCell::new(CellShape::Cheeger, 32, 0.06).unwrap();
    let c = build_cluster_with(&square, 64, 0.05, CellShape::Cheeger, true).unwrap();
    let r = partition_sum_eig(&c, &reference, 1.0).unwrap();
    assert!(r.raw_sum <= r.upper_sum.unwrap());
    assert!(r.scaled >= r.lower_composite.unwrap());
    let max = sup_functionals(&c, &reference, 1.0, PartitionFunctional::EigMax).unwrap();
    // identical cells: the maximum is the mean
    assert!((max.raw_sum * 64.0 - r.raw_sum).abs() < 1e-9 * r.raw_sum);
    assert!(sup_functionals(&c, &reference, 1.0, PartitionFunctional::Eig).is_err());
}

#[test]
fn eig_deviation_decreases_with_k() {
    let square = ConvexPolygon::unit_square();
    let config = HoneycombConfig {
        mesh_h: 0.05,
        arcs: 32,
        ..HoneycombConfig::default()
    };
    let rows = asymptotic_table(
        &square,
        1.0,
        &[16, 64, 256, 1024],
        PartitionFunctional::Eig,
        &config,
    )
    .unwrap();
    assert!(rows.windows(2).all(|w| w[1].deviation < w[0].deviation));
    assert!(rows.last().unwrap().deviation < 0.1);
}

#[test]
fn functional_names_round_trip() {
    for f in [
        PartitionFunctional::PerimeterP1,
        PartitionFunctional::PerimeterP2,
        PartitionFunctional::Eig,
        PartitionFunctional::Torsion,
        PartitionFunctional::TorsionPrinted,
        PartitionFunctional::EigMax,
        PartitionFunctional::TorMax,
        PartitionFunctional::TorMaxPrinted,
    ] {
        assert_eq!(PartitionFunctional::parse(f.name()).unwrap(), f);
    }
    assert!(PartitionFunctional::parse("volume").is_err());
}
