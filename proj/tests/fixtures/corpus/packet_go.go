package packets

import "strings"

const limit = 32

type Record struct {
	Name  string
	Count int
}

func Parse(line string) Record {
	fields := strings.Split(line, ",")
	r := Record{Name: fields[0]}
	if len(fields) > 1 {
		r.Count = len(fields[1])
	}
	return r
}

func Total(records []Record) int {
	sum := 0
	for _, r := range records {
		sum += r.Count
	}
	return sum
}

func Heavy(records []Record) []string {
	var names []string
	for _, r := range records {
		if r.Count >= limit {
			names = append(names, r.Name)
		}
	}
	return names
}
