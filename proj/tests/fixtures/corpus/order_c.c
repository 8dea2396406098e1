#include <stdio.h>
#include <string.h>

#define MAX_ORDERS 8

struct order_record {
    char name[32];
    int count;
};

static int total_count(const struct order_record *records, int n) {
    int total = 0;
    for (int i = 0; i < n; i++) {
        total += records[i].count;
    }
    return total;
}

static int find_order(const struct order_record *records, int n, const char *name) {
    for (int i = 0; i < n; i++) {
        if (strcmp(records[i].name, name) == 0) {
            return i;
        }
    }
    return -1;
}

static void bump(struct order_record *records, int n, const char *name) {
    int at = find_order(records, n, name);
    if (at >= 0) {
        records[at].count += 1;
    }
}

int main(void) {
    struct order_record records[MAX_ORDERS];
    memset(records, 0, sizeof(records));
    int n = 2;
    strcpy(records[0].name, "north");
    strcpy(records[1].name, "south");
    bump(records, n, "north");
    printf("total %d\n", total_count(records, n));
    return 0;
}
