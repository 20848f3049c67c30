//! Fixed prompt wording.

pub(crate) const NER_PERSONA: &str = "You are now a Named Entity Recognition Model.";

pub(crate) const NER_TEMPLATE: &str = r#"I will give you a list of narrative drug prescriptions. Please slice the narrative text based on the Entity Types you detect and organize it as a table record with the columns: Medication ET, Strength ET, Unit ET, Quantity of Dose Form per intake ET, Dose Form ET, Mode ET, Timing ET, Frequency ET, Duration ET, Instructions ET (Dose, Frequency, Duration) without changing anything in the narrative prescription. For missing values, leave the cell blank."#;

pub(crate) const NER_EXAMPLES_INTRO: &str = "Here are some examples that you can study with:";

pub(crate) const EX_PERSONA: &str = "You are now a medication interpretator.";

pub(crate) const EX_TEMPLATE: &str = r#"I will give you a table of medication data in csv format.
Please normalize the information in column named Medication ET, Unit ET, Mode ET, Instruction ET (Dose,Frequency,Duration) based on the following instructions:

Original Text: This is the original narrative text of medication prescription.
Medication ET: This is the medication entity types. Please interpret and put the results in a new table named "Active Ingredients EX". In case of multiple possible entries in the fields of Active Ingredients, separate the entries by ";" in the same cell.
Unit ET: This is a unit entity type. Please interpret this and and put the result in a new table named "Unit EX". For example, "mg" should be "milligram."
Mode ET: This is an intake route entitype type of the medication. Please interpret this and put the result in "Mode EX" column. For example, "po" should be "oral."
Instructions ET (Dose,Frequency,Duration): This is an instruction entity type. Please interpret this and put the result in "Instructions (Dose,Frequency,Duration) EX" column. For example, "1*1 po pc" should be translated into "1 tablet oral after meal once daily"

Here is the table that I want you to transform:"#;

pub(crate) const EX_PLAIN: &str = r#"I will give you a table of medication data in csv format.
Please translate and expand the information in columns named Medication ET, Unit ET, Mode ET, Instruction ET (Dose,Frequency,Duration)

Here is the table that I want you to translate and expand:"#;

pub(crate) const EX_EXAMPLES_INTRO: &str = "Here are some examples that you can look up to:";

pub(crate) const EX_CLOSING: &str = "The end output should compile all results into one unified table.";

pub(crate) const EX_HEADER: &str = r#"Original Text,Medication ET,Unit ET,Mode ET,"Instructions ET (Dose, Frequency, Duration)""#;

pub(crate) const EX_EXAMPLE_HEADER: &str = r#"Original Text,Medication ET,Unit ET,Mode ET,"Instructions ET (Dose, Frequency, Duration)",Active Ingredient EX,Unit EX,Mode EX,"Instructions (Dose, Frequency, Duration) EX""#;
