use chibound_web::{check, colour_graph6, generate};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn generate_families() {
    let g = parse(&generate("grotzsch", 0, 0.0, 0).unwrap());
    assert_eq!(g["order"], 11);
    assert_eq!(g["edges"].as_array().unwrap().len(), 20);
    assert_eq!(parse(&generate("schlafli", 0, 0.0, 0).unwrap())["order"], 27);
    assert_eq!(parse(&generate("h", 6, 0.0, 0).unwrap())["order"], 9);
    assert_eq!(generate("random", 12, 0.4, 9), generate("random", 12, 0.4, 9));
    assert!(generate("random", 12, 1.4, 9).is_err());
    assert!(generate("petersen", 0, 0.0, 0).is_err());
}

#[test]
fn check_and_colour() {
    let g6 = parse(&generate("schlafli", 0, 0.0, 0).unwrap())["graph6"].as_str().unwrap().to_string();
    assert_eq!(parse(&check(&g6).unwrap())["in_class"], true);
    let c = parse(&colour_graph6(&g6).unwrap());
    assert_eq!(c["omega"], 3);
    assert!(c["colours_used"].as_u64().unwrap() <= 6);
    assert_eq!(c["colouring"].as_array().unwrap().len(), 27);
    assert_eq!(c["edges"].as_array().unwrap().len(), 135);

    assert_eq!(parse(&check("C^").unwrap())["in_class"], false);
    assert!(colour_graph6("C^").unwrap_err().contains("Diamond"));
    assert!(check("C\u{7f}").is_err());
}
