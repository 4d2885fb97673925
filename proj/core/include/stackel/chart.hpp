#pragma once

#include <memory>
#include <string>
#include <vector>

namespace stk {

/// A local coordinate chart: a dimension and an ordered list of unique
/// coordinate names. Copies are cheap (shared immutable payload).
class Chart {
public:
    Chart() = default;
    explicit Chart(std::vector<std::string> coordinate_names);

    /// Chart with names x1..xn.
    static Chart standard(int dimension);

    int dimension() const noexcept { return data_ ? data_->n : 0; }
    const std::vector<std::string>& names() const { return data_->names; }
    const std::string& name(int index) const { return data_->names.at(static_cast<std::size_t>(index)); }

    /// Index of a coordinate name, or -1 if the name is not in the chart.
    int index_of(const std::string& name) const;

    bool operator==(const Chart& other) const;
    bool operator!=(const Chart& other) const { return !(*this == other); }

private:
    struct Data {
        int n = 0;
        std::vector<std::string> names;
    };
    std::shared_ptr<const Data> data_;
};

} // namespace stk
