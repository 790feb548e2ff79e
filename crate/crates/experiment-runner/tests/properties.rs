use std::collections::BTreeMap;

use experiment_runner::matrix_file::parse_complex;
use experiment_runner::{emit_tables, parse_table, ResultRecord, Value};
use linalg_core::C64;
use proptest::prelude::*;

fn value() -> impl Strategy<Value = Value> {
    prop_oneof![
        any::<i64>().prop_map(Value::Int),
        any::<f64>().prop_filter("NaN never compares equal", |x| !x.is_nan()).prop_map(Value::Float),
        "[A-Za-z_][A-Za-z0-9_ ,\"]{0,12}"
            .prop_filter("reserved words read back as other types", |s| {
                !matches!(s.as_str(), "true" | "false" | "NaN" | "inf")
            })
            .prop_map(Value::Text),
        any::<bool>().prop_map(Value::Bool),
    ]
}

fn record() -> impl Strategy<Value = ResultRecord> {
    (0usize..50, proptest::collection::vec(value(), 1..6), proptest::collection::vec(any::<bool>(), 0..3)).prop_map(
        |(point, values, checks)| {
            let mut r = ResultRecord::new("t", point);
            r.config_hash = "feed".into();
            for (k, v) in values.into_iter().enumerate() {
                r = r.measure(&format!("c{k}"), v);
            }
            for (k, ok) in checks.into_iter().enumerate() {
                r = r.check(&format!("k{k}"), ok);
            }
            r
        },
    )
}

proptest! {
    #[test]
    fn tables_round_trip(records in proptest::collection::vec(record(), 1..8)) {
        let tables = emit_tables(&records);
        prop_assert_eq!(tables.len(), 1);
        let back = parse_table("t", &tables[0].to_csv().unwrap()).unwrap();
        prop_assert_eq!(back.rows.len(), records.len());
        for (i, r) in records.iter().enumerate() {
            let got: BTreeMap<String, Value> = back.row_fields(i).into_iter().collect();
            let want: BTreeMap<String, Value> = r.columns().into_iter().collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn emitting_twice_gives_the_same_bytes(records in proptest::collection::vec(record(), 1..8)) {
        let a = emit_tables(&records)[0].to_csv().unwrap();
        let b = emit_tables(&records)[0].to_csv().unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn complex_entries_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let text = format!("{re:?}{}{:?}i", if im.is_sign_negative() { "" } else { "+" }, im);
        prop_assert_eq!(parse_complex(&text), Some(C64::new(re, im)));
        let sci = format!("{re:e}{}{:e}i", if im.is_sign_negative() { "" } else { "+" }, im);
        prop_assert_eq!(parse_complex(&sci), Some(C64::new(re, im)));
    }
}
