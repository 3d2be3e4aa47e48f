#ifndef IOREP_REGISTRY_HPP
#define IOREP_REGISTRY_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace iorep {

/// Classification of a registry variable. Block membership is fixed at creation.
enum class VarBlock {
    Param,       // model parameter (alpha)
    State,       // original state variable (x)
    InputDeriv,  // input u and its derivatives u', u'', ...
    OutputDeriv, // output derivative indeterminates Y_{s,i}
    AnsatzZ,     // undetermined ansatz coefficients z_j
    NewState,    // reparametrized state variables w_i
    Tag          // auxiliary tags (saturation variable, field-generator tags)
};

struct VarInfo {
    std::string name;
    VarBlock block = VarBlock::Param;
    int deriv_order = 0; // 0 for non-differential blocks
};

/// Ordered, immutable list of variables shared by all polynomials of a computation.
class VarRegistry {
  public:
    using Ptr = std::shared_ptr<const VarRegistry>;

    static Ptr create(std::vector<VarInfo> vars) {
        return Ptr(new VarRegistry(std::move(vars)));
    }

    /// New registry with extra variables appended (names must stay unique).
    Ptr extended(const std::vector<VarInfo> &extra) const {
        std::vector<VarInfo> all = vars_;
        all.insert(all.end(), extra.begin(), extra.end());
        return create(std::move(all));
    }

    int size() const { return static_cast<int>(vars_.size()); }
    const VarInfo &info(int i) const { return vars_.at(static_cast<size_t>(i)); }
    const std::string &name(int i) const { return info(i).name; }
    VarBlock block(int i) const { return info(i).block; }

    /// Index of a name, or -1 when absent.
    int find(const std::string &name) const {
        auto it = index_.find(name);
        return it == index_.end() ? -1 : it->second;
    }
    int require(const std::string &name) const {
        int i = find(name);
        if (i < 0) throw std::invalid_argument("unknown variable '" + name + "'");
        return i;
    }
    bool has(const std::string &name) const { return find(name) >= 0; }

    std::vector<int> indices_of(VarBlock b) const {
        std::vector<int> out;
        for (int i = 0; i < size(); ++i)
            if (vars_[static_cast<size_t>(i)].block == b) out.push_back(i);
        return out;
    }

    const std::vector<VarInfo> &all() const { return vars_; }

  private:
    explicit VarRegistry(std::vector<VarInfo> vars) : vars_(std::move(vars)) {
        for (int i = 0; i < static_cast<int>(vars_.size()); ++i) {
            const auto &nm = vars_[static_cast<size_t>(i)].name;
            if (nm.empty()) throw std::invalid_argument("registry: empty variable name");
            if (!index_.emplace(nm, i).second)
                throw std::invalid_argument("registry: duplicate variable name '" + nm + "'");
        }
    }

    std::vector<VarInfo> vars_;
    std::map<std::string, int> index_;
};

using RegistryPtr = VarRegistry::Ptr;

} // namespace iorep

#endif
