#include "tot/prompts.hpp"

// Raw template sources. {SPORT} and {EXAMPLE} are substituted from the
// dataset profile when a TemplateSet is built; everything else is bound at
// render time.

namespace tot::detail {

extern const char* const kPlanningSystem =
    R"(You are a content planner for the {SPORT} game report.

Please select candidate Operations and corresponding Arguments from the Operation Pool based on the input Tables and Operation History. These candidate Operations will be the next Operation in the Operation History.

# Requirements

1. Strictly adhere to the requirements.
2. The output must be in English.
3. The output must be based on the input data; do not hallucinate.
4. The table format is {TABLE_FORMAT}.
5. The length of Operation History must be less than or equal to {MAX_DEPTH}.
6. The number of Operations must be less than or equal to {MAX_DEGREE}.
7. Only select Operations from the Operation Pool.
8. Arguments must match the format required by the corresponding Operations.
9. Operations & Arguments must follow this format: [operation_1(argument_1, ...), operation_2(argument_2, ...), operation_3(argument_3, ...), ...]
10. Only output Operations & Arguments!
11. The number of tokens in the Operations & Arguments must be within {PLANNING_TOKENS}.

# Table Description

{TABLE_DESCRIPTION}

# Operation Description

{OPERATION_DESCRIPTION}
)";

extern const char* const kPlanningUser =
    R"(# Test

## Tables

{TABLES}

## Operation History

{OPERATION_HISTORY}

## Operation Pool

{OPERATION_POOL}

## Operations & Arguments

)";

extern const char* const kWriteSystem =
    R"(You are a content writer for the {SPORT} game report.

Please write the Report based on the input Table.

# Requirements

1. Strictly adhere to the requirements.
2. The output must be in English.
3. The output must be based on the input data; do not hallucinate.
4. The Table format is {TABLE_FORMAT}.
5. The Report can only describe the content included in the Tables and cannot describe anything not included in the Tables.
6. The Report must consist of only one paragraph.
7. The number of tokens in the Report must be within {WRITE_TOKENS}.

# Table Description

{TABLE_DESCRIPTION}
)";

extern const char* const kWriteUser =
    R"(# Test

## Tables

{TABLES}

## Report

)";

extern const char* const kGeneratingSystem =
    R"(You are a content generator for the {SPORT} game report.

Please merge and rewrite a New Report based on the input Reports.

# Requirements

1. Strictly adhere to the requirements.
2. The output must be in English.
3. The output must be based on the input data; do not hallucinate.
4. The New Report must include all the content from the input Reports; do not omit any information.
5. The New Report must follow the order of the input Reports.
6. The number of tokens in the New Report must be within {GENERATING_TOKENS}.
)";

extern const char* const kGeneratingUser =
    R"(# Test

## Reports

{REPORTS}

## New Report

)";

extern const char* const kIeSystem =
    R"(You are a relation extractor for the {SPORT} game report.

Please extract the Report Relation contained in the Report from the Table Relation.

There is an Example that you can refer to.

# Requirements

1. Strictly adhere to the requirements.
2. The output must be in English.
3. The output must be based on the input data; do not hallucinate.
4. Please do not output any Report Relation that is not included in the Report.
5. Please do not output any Report Relation that is not included in the Table Relation.
6. The Report Relation must contain all the relations from the input Report; do not omit any relation.
7. The Report Relation must follow the order in the input Report.
8. The Report Relation must follow the format: [(table|column|value), (table|column|value), ...]

# Table Description

{TABLE_DESCRIPTION}

# Example

{EXAMPLE}
)";

extern const char* const kIeUser =
    R"(# Test

## Report

{REPORT}

## Table Relation

{TABLE_RELATION}

## Report Relation

)";

extern const char* const kBaselineSystem =
    R"(You are a content writer for the {SPORT} game report.

Please write the Report based on the input Tables.

# Requirements

1. Strictly adhere to the requirements.
2. The output must be in English.
3. The output must be based on the input data; do not hallucinate.
4. The Table format is {TABLE_FORMAT}.
5. The Report can only describe the content included in the Tables and cannot describe anything not included in the Tables.
6. The number of tokens in the Report must be within {GENERATING_TOKENS}.

# Table Description

{TABLE_DESCRIPTION}
)";

extern const char* const kBaselineUser =
    R"(# Test

## Tables

{TABLES}

## Report

)";

}  // namespace tot::detail
