mod common;

use common::hilbert_oracle;
use metacover::local_field::LocalField;

fn symbol(desc: &str, a: &str, b: &str) -> i8 {
    let f = LocalField::parse(desc).unwrap();
    hilbert_oracle(&f, &f.parse_element(a).unwrap(), &f.parse_element(b).unwrap())
}

#[test]
fn oracle_matches_textbook_values() {
    let cases = [
        ("Qp:2", "-1", "-1", -1),
        ("Qp:2", "2", "3", -1),
        ("Qp:2", "2", "7", 1),
        ("Qp:2", "3", "3", -1),
        ("Qp:2", "5", "2", -1),
        ("Qp:3", "3", "3", -1),
        ("Qp:3", "-1", "-1", 1),
        ("Qp:3", "2", "3", -1),
        ("Qp:5", "5", "5", 1),
        ("Qp:5", "5", "2", -1),
        ("Qp:7", "7", "-1", -1),
        ("Qp:7", "7", "2", 1),
        ("Fq((t)):5", "t", "2", -1),
        ("Fq((t)):5", "t", "4", 1),
        ("Fq((t)):3", "t", "t", -1),
        ("Fq((t)):5", "t", "t", 1),
        ("Fq((t)):3", "0:1,1:1", "t", 1),
    ];
    for (field, a, b, want) in cases {
        assert_eq!(symbol(field, a, b), want, "{{{a}, {b}}} over {field}");
    }
}
