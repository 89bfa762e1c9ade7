// Walks the eight-flower example through every stage and prints what each
// one produces. Optional argument: a directory holding flowers.csv/.plan.

#include <iostream>

#include "cacluster/cacluster.hpp"

using namespace cacluster;

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : CACLUSTER_DEMO_DATA;
    try {
        auto table = read_csv_text(read_file(dir + "/flowers.csv"));
        auto plan = EncodingPlan::parse(read_file(dir + "/flowers.plan"));
        auto ds = encode_dataset(plan, table);

        std::cout << "encoded objects\n";
        for (std::size_t j = 0; j < ds.size(); ++j)
            std::cout << "  " << table.rows[j][0] << "  " << ds.objects[j].to_string() << "  = "
                      << ds.objects[j].extract(0, ds.objects[j].size()) << "\n";

        Rule rule = rule_from_decimal(267422991);
        std::cout << "\nrule " << rule.decimal() << " at n=5\n";
        std::vector<std::uint64_t> values;
        for (const auto& o : ds.objects) values.push_back(o.extract(0, o.size()));
        std::cout << orbit_membership(rule, 5, values);

        ClusterParams p;
        p.rules = {rule};
        p.split_size = 5;
        p.clusters = 3;
        auto r = cluster(ds, p);
        std::cout << "\ntrace\n";
        r.write_trace(std::cout);

        auto x = feature_matrix(table, plan);
        std::cout << "\n";
        score(x, r.labels).write(std::cout);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
