const LIMIT: i32 = 16;

pub struct Record {
    pub name: String,
    pub count: i32,
}

pub fn parse(line: &str) -> Record {
    let mut parts = line.splitn(2, ',');
    let name = parts.next().unwrap_or("").to_string();
    let count = parts.next().and_then(|p| p.trim().parse().ok()).unwrap_or(0);
    Record { name, count }
}

pub fn total(records: &[Record]) -> i32 {
    let mut sum = 0;
    for record in records {
        sum += record.count;
    }
    sum
}

pub fn heavy(records: &[Record]) -> Vec<String> {
    let mut names = Vec::new();
    for record in records {
        if record.count >= LIMIT {
            names.push(record.name.clone());
        }
    }
    names
}
