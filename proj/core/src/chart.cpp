#include "stackel/chart.hpp"

#include <algorithm>
#include <stdexcept>

namespace stk {

Chart::Chart(std::vector<std::string> coordinate_names) {
    if (coordinate_names.empty())
        throw std::invalid_argument("chart needs at least one coordinate");
    for (std::size_t i = 0; i < coordinate_names.size(); ++i)
        for (std::size_t j = i + 1; j < coordinate_names.size(); ++j)
            if (coordinate_names[i] == coordinate_names[j])
                throw std::invalid_argument("duplicate coordinate name: " + coordinate_names[i]);
    auto data = std::make_shared<Data>();
    data->n = static_cast<int>(coordinate_names.size());
    data->names = std::move(coordinate_names);
    data_ = std::move(data);
}

Chart Chart::standard(int dimension) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(dimension));
    for (int i = 1; i <= dimension; ++i) names.push_back("x" + std::to_string(i));
    return Chart(std::move(names));
}

int Chart::index_of(const std::string& name) const {
    if (!data_) return -1;
    auto it = std::find(data_->names.begin(), data_->names.end(), name);
    if (it == data_->names.end()) return -1;
    return static_cast<int>(it - data_->names.begin());
}

bool Chart::operator==(const Chart& other) const {
    if (data_ == other.data_) return true;
    if (!data_ || !other.data_) return false;
    return data_->names == other.data_->names;
}

} // namespace stk
