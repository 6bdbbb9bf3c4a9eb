use minkowski_gauge::bodies::{self, BodySpec, WeightMode};
use minkowski_gauge::convex;
use minkowski_gauge::convex::vector::vector as v;
use minkowski_gauge::{Body, Error};

fn same_supports(a: &Body, b: &Body) {
    for u in convex::sample_directions(a.dim(), 200, 3) {
        let (x, y) = (a.support(&u).unwrap(), b.support(&u).unwrap());
        assert!((x - y).abs() < 1e-12 * (1.0 + x.abs()), "{x} {y}");
    }
}

#[test]
fn every_kind_parses() {
    let docs = [
        r#"{"kind":"hpolytope","A":[[1,0],[-1,0],[0,1],[0,-1]],"b":[1,1,1,1],"dim":2}"#,
        r#"{"kind":"vpolytope","vertices":[[0,0],[1,0],[0,1]]}"#,
        r#"{"kind":"ball","center":[0,0,0],"radius":2}"#,
        r#"{"kind":"box","low":[0,0],"high":[1,3]}"#,
        r#"{"kind":"simplex","dim":3}"#,
        r#"{"kind":"product","factors":[{"kind":"simplex","dim":1},{"kind":"simplex","dim":2}]}"#,
        r#"{"kind":"sum","terms":[{"kind":"simplex","dim":2},{"kind":"ball","center":[0,0],"radius":1}]}"#,
        r#"{"kind":"scaled","body":{"kind":"simplex","dim":2},"factor":3}"#,
        r#"{"kind":"translated","body":{"kind":"simplex","dim":2},"offset":[1,1]}"#,
        r#"{"kind":"reflected","body":{"kind":"simplex","dim":2}}"#,
        r#"{"kind":"regular_polygon","n":7}"#,
        r#"{"kind":"half_disc_approx","n":32}"#,
        r#"{"kind":"sobczyk_prism"}"#,
        r#"{"kind":"weighted_l2_ball","dim":4,"mode":"ii"}"#,
    ];
    for d in docs {
        let b = bodies::parse_body(d).unwrap_or_else(|e| panic!("{d}: {e}"));
        b.validate().unwrap();
        let again = bodies::parse_body(&bodies::serialize_body(&b).unwrap()).unwrap();
        assert_eq!(again.dim(), b.dim());
        same_supports(&b, &again);
    }
}

#[test]
fn schema_errors_carry_positions() {
    for d in [
        "{\"kind\":\"ball\",\n \"center\":[0,0],\n \"radius\":\"x\"}",
        r#"{"kind":"teapot"}"#,
        r#"{"kind":"ball","center":[0,0],"radius":1,"color":"red"}"#,
        "not json",
    ] {
        match bodies::parse_body(d) {
            Err(Error::Schema { line, column, message }) => {
                assert!(line >= 1 && column >= 1, "{d}");
                assert!(!message.contains(" at line "));
            }
            other => panic!("{d}: {other:?}"),
        }
    }
}

#[test]
fn invalid_bodies_are_rejected() {
    for d in [
        r#"{"kind":"hpolytope","A":[[1,0],[-1,0],[0,1]],"b":[1,1,1]}"#,
        r#"{"kind":"vpolytope","vertices":[[0,0],[1,1],[2,2]]}"#,
        r#"{"kind":"ball","center":[0,0],"radius":-1}"#,
        r#"{"kind":"box","low":[0,0],"high":[1]}"#,
        r#"{"kind":"ball","center":[0,0],"radius":1,"dim":3}"#,
        r#"{"kind":"scaled","body":{"kind":"simplex","dim":2},"factor":0}"#,
        r#"{"kind":"regular_polygon","n":2}"#,
        r#"{"kind":"simplex","dim":0}"#,
    ] {
        let e = bodies::parse_body(d);
        assert!(e.is_err(), "{d}");
        assert!(!matches!(e, Err(Error::Schema { .. })), "{d}");
    }
}

#[test]
fn spec_round_trip_is_structural() {
    let spec = bodies::parse_spec(r#"{"kind":"scaled","body":{"kind":"box","low":[0,0],"high":[1,2]},"factor":2}"#).unwrap();
    let b = spec.build().unwrap();
    assert!(matches!(BodySpec::from_body(&b).unwrap(), BodySpec::Scaled { .. }));
}

#[test]
fn constructors() {
    let s = Body::V(bodies::make_simplex(3).unwrap());
    assert_eq!(s.vertices().unwrap().len(), 4);
    let p = Body::V(bodies::make_regular_polygon(6, 2.0, [1.0, 0.0]).unwrap());
    assert!((p.support(&v(&[1.0, 0.0])).unwrap() - 3.0).abs() < 1e-12);
    let prism = bodies::make_sobczyk_prism();
    assert_eq!(prism.dim(), 3);
    assert_eq!(prism.vertices().unwrap().len(), 6);
    let hd = Body::V(bodies::make_half_disc(400).unwrap());
    let c = bodies::half_disc_centroid();
    assert!((c[1] - 4.0 / (3.0 * std::f64::consts::PI)).abs() < 1e-15);
    assert!(hd.contains(&c, 0.0).unwrap());
}

#[test]
fn weighted_ball_supports() {
    let b = bodies::make_weighted_l2_ball(3, WeightMode::Increasing).unwrap();
    // weights 2, 3/2, 4/3
    assert!((b.eval(&v(&[1.0, 0.0, 0.0])) - 0.5f64.sqrt()).abs() < 1e-15);
    assert!((b.eval(&v(&[0.0, 0.0, 1.0])) - 0.75f64.sqrt()).abs() < 1e-15);
    let b = bodies::make_weighted_l2_ball(3, WeightMode::Decreasing).unwrap();
    assert!((b.eval(&v(&[1.0, 0.0, 0.0])) - 1.0).abs() < 1e-15);
    assert!(b.sampled_defect(500, 1) < 1e-12);
    assert!(bodies::make_weighted_l2_ball(0, WeightMode::Decreasing).is_err());
}
